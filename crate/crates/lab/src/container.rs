//! Binary containers for grid functions and partitions, with JSON sidecars.
//!
//! Grid function layout (little-endian): `u64 d`, `u64 n`, `f64 R`, then
//! `n^d` complex samples as interleaved `f64` pairs, row-major. Partition
//! layout: `u64 ndims`, `ndims × u64` dims (mask count first, then the axis
//! lengths), then the masks' samples as `f64`, row-major. The sidecar lands
//! next to the payload with `.json` appended.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::FrequencyGrid;
use crate::partition::{MaskLabel, Partition, PartitionKind};
use crate::signal::GridFunction;

#[derive(Debug, Error)]
pub enum ContainerError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: truncated or malformed container")]
    Malformed { path: PathBuf },
    #[error("{path}: {source}")]
    Sidecar {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
    #[error(transparent)]
    Signal(#[from] crate::signal::SignalError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ContainerError + '_ {
    move |source| ContainerError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".json");
    PathBuf::from(name)
}

#[derive(Debug, Serialize, Deserialize)]
struct GridFunctionSidecar {
    kind: String,
    d: usize,
    n: usize,
    box_halfwidth: f64,
}

/// Writes the samples of `f` plus a JSON sidecar.
pub fn write_grid_function(f: &GridFunction, path: &Path) -> Result<(), ContainerError> {
    let grid = f.grid();
    let mut out = Vec::with_capacity(24 + 16 * grid.len());
    out.extend_from_slice(&(grid.dimension() as u64).to_le_bytes());
    out.extend_from_slice(&(grid.samples_per_axis() as u64).to_le_bytes());
    out.extend_from_slice(&grid.box_halfwidth().to_le_bytes());
    for z in f.samples().iter() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    std::fs::write(path, out).map_err(io_err(path))?;
    let sidecar = GridFunctionSidecar {
        kind: "grid_function".into(),
        d: grid.dimension(),
        n: grid.samples_per_axis(),
        box_halfwidth: grid.box_halfwidth(),
    };
    let text = serde_json::to_string_pretty(&sidecar).expect("serializable");
    std::fs::write(sidecar_path(path), text).map_err(io_err(path))
}

fn read_u64(reader: &mut impl Read, path: &Path) -> Result<u64, ContainerError> {
    let mut buf = [0u8; 8];
    reader.read_exact(&mut buf).map_err(io_err(path))?;
    Ok(u64::from_le_bytes(buf))
}

fn read_f64(reader: &mut impl Read, path: &Path) -> Result<f64, ContainerError> {
    let mut buf = [0u8; 8];
    reader.read_exact(&mut buf).map_err(io_err(path))?;
    Ok(f64::from_le_bytes(buf))
}

/// Reads a grid function written by [`write_grid_function`].
pub fn read_grid_function(path: &Path) -> Result<GridFunction, ContainerError> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut reader = std::io::BufReader::new(file);
    let d = read_u64(&mut reader, path)? as usize;
    let n = read_u64(&mut reader, path)? as usize;
    let r = read_f64(&mut reader, path)?;
    let grid = FrequencyGrid::new(d, n, r)?;
    let mut samples = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut reader, path)?;
        let im = read_f64(&mut reader, path)?;
        samples.push(Complex64::new(re, im));
    }
    let mut rest = [0u8; 1];
    if reader.read(&mut rest).map_err(io_err(path))? != 0 {
        return Err(ContainerError::Malformed {
            path: path.to_path_buf(),
        });
    }
    Ok(GridFunction::from_samples(grid, samples)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct PartitionSidecar {
    kind: String,
    dtype: String,
    layout: String,
    levels: Vec<String>,
    grid: GridFunctionSidecar,
}

/// Exports every mask of the partition into one dense tensor container.
pub fn write_partition(partition: &Partition, path: &Path) -> Result<(), ContainerError> {
    let grid = partition.grid();
    let d = grid.dimension();
    let masks = partition.masks();
    let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err(path))?);
    let ndims = (d + 1) as u64;
    file.write_all(&ndims.to_le_bytes()).map_err(io_err(path))?;
    file.write_all(&(masks.len() as u64).to_le_bytes())
        .map_err(io_err(path))?;
    for _ in 0..d {
        file.write_all(&(grid.samples_per_axis() as u64).to_le_bytes())
            .map_err(io_err(path))?;
    }
    for mask in masks {
        for v in mask.materialize() {
            file.write_all(&v.to_le_bytes()).map_err(io_err(path))?;
        }
    }
    file.flush().map_err(io_err(path))?;

    let sidecar = PartitionSidecar {
        kind: match partition.kind() {
            PartitionKind::CubeIso => "cube_iso".into(),
            PartitionKind::TensorMixed => "tensor_mixed".into(),
        },
        dtype: "float64".into(),
        layout: "row-major".into(),
        levels: masks.iter().map(|m| m.label().render()).collect(),
        grid: GridFunctionSidecar {
            kind: "grid".into(),
            d,
            n: grid.samples_per_axis(),
            box_halfwidth: grid.box_halfwidth(),
        },
    };
    let text = serde_json::to_string_pretty(&sidecar).expect("serializable");
    std::fs::write(sidecar_path(path), text).map_err(io_err(path))
}

/// Raw partition payload: dims plus the stacked mask samples.
pub fn read_partition_tensor(path: &Path) -> Result<(Vec<u64>, Vec<f64>), ContainerError> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut reader = std::io::BufReader::new(file);
    let ndims = read_u64(&mut reader, path)? as usize;
    if ndims == 0 || ndims > 8 {
        return Err(ContainerError::Malformed {
            path: path.to_path_buf(),
        });
    }
    let mut dims = Vec::with_capacity(ndims);
    for _ in 0..ndims {
        dims.push(read_u64(&mut reader, path)?);
    }
    let total: u64 = dims.iter().product();
    let mut data = Vec::with_capacity(total as usize);
    for _ in 0..total {
        data.push(read_f64(&mut reader, path)?);
    }
    Ok((dims, data))
}

/// Labels recorded in a partition sidecar.
pub fn read_partition_labels(path: &Path) -> Result<Vec<String>, ContainerError> {
    let side = sidecar_path(path);
    let text = std::fs::read_to_string(&side).map_err(io_err(&side))?;
    let sidecar: PartitionSidecar =
        serde_json::from_str(&text).map_err(|source| ContainerError::Sidecar {
            path: side.clone(),
            source,
        })?;
    Ok(sidecar.levels)
}

/// Renders a mask label the way sidecars and reports spell it.
pub fn render_label(label: &MaskLabel) -> String {
    label.render()
}
