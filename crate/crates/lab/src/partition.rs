//! Discrete smooth dyadic decompositions of unity in frequency space.
//!
//! Two families are built from one smooth step: cube annulus masks driven by
//! the sup-norm of the frequency vector, and tensor masks formed as products
//! of 1-D dyadic band masks per axis. Both telescope, so the partition sums
//! are exactly 1 on the covered cube up to floating-point cancellation.
//!
//! Masks evaluate through per-axis tables; a dense copy is materialized only
//! when the configured memory budget permits. Either representation yields
//! bit-identical values since the dense form is sampled from the tables.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use besov_core::smooth::SmoothStep;
use besov_core::tol;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::FrequencyGrid;

#[derive(Debug, Error)]
pub enum PartitionError {
    #[error("mask band reaches {required} but the Nyquist cube ends at {nyquist}")]
    NyquistOverflow { required: f64, nyquist: f64 },
    #[error("partitions live on different grids")]
    GridMismatch,
    #[error("expected a {expected:?} partition, got {got:?}")]
    KindMismatch {
        expected: PartitionKind,
        got: PartitionKind,
    },
    #[error("lattice overlap at cube level {j}, tensor index {kbar:?} violates the dyadic band")]
    OverlapOutsideBand { j: u32, kbar: Vec<u32> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PartitionKind {
    CubeIso,
    TensorMixed,
}

/// Label of a frequency mask: a scalar level or a per-axis multi-index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MaskLabel {
    Level(u32),
    Tensor(Vec<u32>),
}

impl MaskLabel {
    /// `|k̄| = k_1 + … + k_d` for tensor labels, the level itself otherwise.
    pub fn weight_exponent(&self) -> u32 {
        match self {
            MaskLabel::Level(j) => *j,
            MaskLabel::Tensor(k) => k.iter().sum(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            MaskLabel::Level(j) => format!("{j}"),
            MaskLabel::Tensor(k) => {
                let parts: Vec<String> = k.iter().map(|v| v.to_string()).collect();
                format!("({})", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug)]
enum MaskRep {
    /// Cube annulus: `Π_i hi[v_i] - Π_i lo[v_i]`, with `lo` absent at level
    /// zero. The plateau factors per axis, so the mask is smooth across the
    /// diagonals and its kernel keeps rapid decay.
    Cube {
        hi: Arc<Vec<f64>>,
        lo: Option<Arc<Vec<f64>>>,
    },
    /// Tensor product of per-axis 1-D band tables.
    Tensor { axes: Vec<Arc<Vec<f64>>> },
    /// Materialized samples over the whole lattice.
    Dense { data: Arc<Vec<f64>> },
}

/// One real-valued mask on the frequency lattice, values in `[0, 1]`.
#[derive(Clone, Debug)]
pub struct FrequencyMask {
    label: MaskLabel,
    grid: FrequencyGrid,
    rep: MaskRep,
}

impl FrequencyMask {
    pub fn label(&self) -> &MaskLabel {
        &self.label
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Mask value at the lattice point with the given per-axis positions.
    /// `flat` must be the matching row-major index.
    pub fn value_at(&self, flat: usize, axes: &[usize]) -> f64 {
        match &self.rep {
            MaskRep::Dense { data } => data[flat],
            MaskRep::Cube { hi, lo } => {
                let mut h = 1.0;
                for &a in axes {
                    h *= hi[a];
                }
                match lo {
                    None => h,
                    Some(lo) => {
                        let mut l = 1.0;
                        for &a in axes {
                            l *= lo[a];
                        }
                        h - l
                    }
                }
            }
            MaskRep::Tensor { axes: tables } => {
                let mut v = 1.0;
                for (table, &a) in tables.iter().zip(axes) {
                    v *= table[a];
                    if v == 0.0 {
                        break;
                    }
                }
                v
            }
        }
    }

    /// Same as [`Self::value_at`] when only axis positions are at hand.
    pub fn value_at_axes(&self, axes: &[usize]) -> f64 {
        match &self.rep {
            MaskRep::Dense { .. } => {
                let strides = self.grid.strides();
                let flat: usize = axes.iter().zip(&strides).map(|(a, s)| a * s).sum();
                self.value_at(flat, axes)
            }
            _ => self.value_at(0, axes),
        }
    }

    /// Samples the mask densely over the lattice, row-major.
    pub fn materialize(&self) -> Vec<f64> {
        if let MaskRep::Dense { data } = &self.rep {
            return data.as_ref().clone();
        }
        let mut out = vec![0.0; self.grid.len()];
        self.grid.for_each_index(|flat, axes| {
            out[flat] = self.value_at(flat, axes);
        });
        out
    }
}

/// An ordered family of masks forming a decomposition of unity up to its
/// top level.
#[derive(Clone, Debug)]
pub struct Partition {
    kind: PartitionKind,
    grid: FrequencyGrid,
    masks: Vec<FrequencyMask>,
    max_level: u32,
}

impl Partition {
    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn masks(&self) -> &[FrequencyMask] {
        &self.masks
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Sup-norm radius of the cube on which the masks sum to one.
    pub fn coverage_radius(&self) -> f64 {
        (2.0f64).powi(self.max_level as i32)
    }

    pub fn mask_for_level(&self, j: u32) -> Option<&FrequencyMask> {
        self.masks
            .iter()
            .find(|m| matches!(m.label(), MaskLabel::Level(l) if *l == j))
    }

    pub fn mask_for_tensor(&self, kbar: &[u32]) -> Option<&FrequencyMask> {
        self.masks
            .iter()
            .find(|m| matches!(m.label(), MaskLabel::Tensor(k) if k.as_slice() == kbar))
    }
}

fn check_band_fits(grid: &FrequencyGrid, top_level: u32) -> Result<(), PartitionError> {
    let required = 1.5 * (2.0f64).powi(top_level as i32);
    let nyquist = grid.nyquist();
    if required > nyquist + 1e-9 {
        return Err(PartitionError::NyquistOverflow { required, nyquist });
    }
    Ok(())
}

/// Per-axis table of the step at dyadic scale `j`: `s(2^{-j} |ξ_v|)`.
fn level_table(grid: &FrequencyGrid, step: &SmoothStep, j: u32) -> Arc<Vec<f64>> {
    let scale = (2.0f64).powi(-(j as i32));
    let table: Vec<f64> = (0..grid.samples_per_axis())
        .map(|v| step.value(scale * grid.freq_at(v).abs()))
        .collect();
    Arc::new(table)
}

fn densify_if_budgeted(masks: &mut Vec<FrequencyMask>, grid: &FrequencyGrid, budget: usize) {
    let bytes = masks.len().saturating_mul(grid.len()).saturating_mul(8);
    if bytes == 0 || bytes > budget {
        return;
    }
    for mask in masks.iter_mut() {
        let data = Arc::new(mask.materialize());
        mask.rep = MaskRep::Dense { data };
    }
}

/// Builds the cube masks `ψ_0 … ψ_J`.
pub fn build_cube_partition(grid: &FrequencyGrid, levels: u32) -> Result<Partition, PartitionError> {
    build_cube_partition_with(grid, levels, crate::config::default_memory_budget())
}

pub fn build_cube_partition_with(
    grid: &FrequencyGrid,
    levels: u32,
    memory_budget: usize,
) -> Result<Partition, PartitionError> {
    check_band_fits(grid, levels)?;
    let step = SmoothStep::new();
    let tables: Vec<Arc<Vec<f64>>> = (0..=levels).map(|j| level_table(grid, &step, j)).collect();
    let mut masks = Vec::with_capacity(levels as usize + 1);
    for j in 0..=levels {
        let rep = MaskRep::Cube {
            hi: tables[j as usize].clone(),
            lo: (j > 0).then(|| tables[j as usize - 1].clone()),
        };
        masks.push(FrequencyMask {
            label: MaskLabel::Level(j),
            grid: *grid,
            rep,
        });
    }
    densify_if_budgeted(&mut masks, grid, memory_budget);
    Ok(Partition {
        kind: PartitionKind::CubeIso,
        grid: *grid,
        masks,
        max_level: levels,
    })
}

/// Builds the tensor masks `φ_k̄` for all `k̄ ∈ {0..K}^d`, in lexicographic
/// order.
pub fn build_tensor_partition(
    grid: &FrequencyGrid,
    levels: u32,
) -> Result<Partition, PartitionError> {
    build_tensor_partition_with(grid, levels, crate::config::default_memory_budget())
}

pub fn build_tensor_partition_with(
    grid: &FrequencyGrid,
    levels: u32,
    memory_budget: usize,
) -> Result<Partition, PartitionError> {
    check_band_fits(grid, levels)?;
    let step = SmoothStep::new();
    let scaled: Vec<Arc<Vec<f64>>> = (0..=levels).map(|j| level_table(grid, &step, j)).collect();
    // 1-D band masks: φ_0 = s(|ξ|), φ_k = s(2^{-k}|ξ|) - s(2^{-k+1}|ξ|)
    let mut bands: Vec<Arc<Vec<f64>>> = Vec::with_capacity(levels as usize + 1);
    for k in 0..=levels as usize {
        if k == 0 {
            bands.push(scaled[0].clone());
        } else {
            let table: Vec<f64> = scaled[k]
                .iter()
                .zip(scaled[k - 1].iter())
                .map(|(hi, lo)| hi - lo)
                .collect();
            bands.push(Arc::new(table));
        }
    }
    let d = grid.dimension();
    let count = (levels as usize + 1).pow(d as u32);
    let mut masks = Vec::with_capacity(count);
    let mut kbar = vec![0u32; d];
    for _ in 0..count {
        let axes: Vec<Arc<Vec<f64>>> = kbar.iter().map(|&k| bands[k as usize].clone()).collect();
        masks.push(FrequencyMask {
            label: MaskLabel::Tensor(kbar.clone()),
            grid: *grid,
            rep: MaskRep::Tensor { axes },
        });
        for a in (0..d).rev() {
            kbar[a] += 1;
            if kbar[a] <= levels {
                break;
            }
            kbar[a] = 0;
        }
    }
    densify_if_budgeted(&mut masks, grid, memory_budget);
    Ok(Partition {
        kind: PartitionKind::TensorMixed,
        grid: *grid,
        masks,
        max_level: levels,
    })
}

/// Index sets of cube/tensor support intersections, computed from the
/// lattice supports.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OverlapSets {
    /// `j → { k̄ : supp ψ_j ∩ supp φ_k̄ ≠ ∅ }`
    pub delta: BTreeMap<u32, BTreeSet<Vec<u32>>>,
    /// `k̄ → { j }`, the transpose
    pub square: BTreeMap<Vec<u32>, BTreeSet<u32>>,
}

/// Computes the overlap sets from actual lattice supports, then checks them
/// against the analytic dyadic band `max k_i - 1 <= j <= max k_i + 1`.
pub fn overlap_sets(cube: &Partition, tensor: &Partition) -> Result<OverlapSets, PartitionError> {
    if cube.grid != tensor.grid {
        return Err(PartitionError::GridMismatch);
    }
    if cube.kind != PartitionKind::CubeIso {
        return Err(PartitionError::KindMismatch {
            expected: PartitionKind::CubeIso,
            got: cube.kind,
        });
    }
    if tensor.kind != PartitionKind::TensorMixed {
        return Err(PartitionError::KindMismatch {
            expected: PartitionKind::TensorMixed,
            got: tensor.kind,
        });
    }
    let grid = &cube.grid;
    let d = grid.dimension();
    let kmax = tensor.max_level;

    // per-axis: which 1-D bands are active at each axis position
    let step = SmoothStep::new();
    let scaled: Vec<Vec<f64>> = (0..=kmax)
        .map(|j| level_table(grid, &step, j).as_ref().clone())
        .collect();
    let n = grid.samples_per_axis();
    let mut active_bands: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (v, bands) in active_bands.iter_mut().enumerate() {
        for k in 0..=kmax {
            let value = if k == 0 {
                scaled[0][v]
            } else {
                scaled[k as usize][v] - scaled[k as usize - 1][v]
            };
            if value > tol::SUPPORT_ZERO {
                bands.push(k);
            }
        }
    }

    let mut sets = OverlapSets::default();
    let mut combo = vec![0usize; d];
    grid.for_each_index(|_, axes| {
        // cube levels active at this point
        let mut live_levels: [Option<u32>; 2] = [None, None];
        let mut live_count = 0;
        for j in 0..=cube.max_level {
            let mask = &cube.masks[j as usize];
            if mask.value_at_axes(axes) > tol::SUPPORT_ZERO {
                if live_count < 2 {
                    live_levels[live_count] = Some(j);
                }
                live_count += 1;
            }
        }
        if live_count == 0 {
            return;
        }
        // enumerate tensor combos from per-axis active bands
        let sizes: Vec<usize> = axes.iter().map(|&a| active_bands[a].len()).collect();
        if sizes.iter().any(|&s| s == 0) {
            return;
        }
        combo.iter_mut().for_each(|c| *c = 0);
        loop {
            let kbar: Vec<u32> = combo
                .iter()
                .zip(axes)
                .map(|(&c, &a)| active_bands[a][c])
                .collect();
            for slot in live_levels.iter().flatten() {
                sets.delta.entry(*slot).or_default().insert(kbar.clone());
                sets.square.entry(kbar.clone()).or_default().insert(*slot);
            }
            let mut carry = d;
            for a in (0..d).rev() {
                combo[a] += 1;
                if combo[a] < sizes[a] {
                    carry = a;
                    break;
                }
                combo[a] = 0;
            }
            if carry == d {
                break;
            }
        }
    });

    // belt and braces: computed overlaps must respect the analytic band
    for (kbar, js) in &sets.square {
        let m = *kbar.iter().max().unwrap() as i64;
        for &j in js {
            let j = j as i64;
            if j < m - 1 || j > m + 1 {
                return Err(PartitionError::OverlapOutsideBand {
                    j: j as u32,
                    kbar: kbar.clone(),
                });
            }
        }
    }
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(d: usize, n: usize, r: f64) -> FrequencyGrid {
        FrequencyGrid::new(d, n, r).unwrap()
    }

    #[test]
    fn level_zero_is_one_inside_unit_cube() {
        let g = grid(2, 256, 64.0 * std::f64::consts::PI);
        let p = build_cube_partition(&g, 0).unwrap();
        let mask = p.mask_for_level(0).unwrap();
        g.for_each_index(|flat, axes| {
            let sup = axes
                .iter()
                .map(|&a| g.freq_at(a).abs())
                .fold(0.0f64, f64::max);
            let v = mask.value_at(flat, axes);
            if sup <= 1.0 {
                assert_eq!(v, 1.0);
            }
            if sup >= 1.5 {
                assert_eq!(v, 0.0);
            }
            assert!((0.0..=1.0).contains(&v));
        });
    }

    #[test]
    fn telescoping_sum_equals_rescaled_plateau() {
        let g = grid(2, 128, std::f64::consts::PI);
        let p = build_cube_partition(&g, 3).unwrap();
        let step = SmoothStep::new();
        g.for_each_index(|flat, axes| {
            let sum: f64 = p.masks().iter().map(|m| m.value_at(flat, axes)).sum();
            let expected: f64 = axes
                .iter()
                .map(|&a| step.value(g.freq_at(a).abs() / 8.0))
                .product();
            let sup = axes
                .iter()
                .map(|&a| g.freq_at(a).abs())
                .fold(0.0f64, f64::max);
            assert!((sum - expected).abs() < 1e-12);
            if sup <= 8.0 {
                assert!((sum - 1.0).abs() < 1e-12);
            }
        });
    }

    #[test]
    fn nyquist_overflow_is_an_error() {
        let g = grid(1, 64, std::f64::consts::PI);
        // Nyquist 32, ψ_5 needs 48
        assert!(matches!(
            build_cube_partition(&g, 5),
            Err(PartitionError::NyquistOverflow { .. })
        ));
        assert!(build_cube_partition(&g, 4).is_ok());
    }

    #[test]
    fn tensor_partition_of_unity_small() {
        let g = grid(2, 64, std::f64::consts::PI);
        let p = build_tensor_partition(&g, 1).unwrap();
        assert_eq!(p.masks().len(), 4);
        g.for_each_index(|flat, axes| {
            let sum: f64 = p.masks().iter().map(|m| m.value_at(flat, axes)).sum();
            let sup = axes
                .iter()
                .map(|&a| g.freq_at(a).abs())
                .fold(0.0f64, f64::max);
            if sup <= 2.0 {
                assert!((sum - 1.0).abs() < 1e-12, "at sup {sup}: {sum}");
            }
        });
    }

    #[test]
    fn tensor_mask_support_and_plateau() {
        let g = grid(2, 64, std::f64::consts::PI);
        let p = build_tensor_partition(&g, 2).unwrap();
        let mask = p.mask_for_tensor(&[2, 0]).unwrap();
        g.for_each_index(|flat, axes| {
            let x0 = g.freq_at(axes[0]).abs();
            let x1 = g.freq_at(axes[1]).abs();
            let v = mask.value_at(flat, axes);
            let inside = (2.0..=6.0).contains(&x0) && x1 <= 1.5;
            if !inside {
                assert!(v.abs() < 1e-14, "({x0},{x1}) -> {v}");
            }
            // plateau: exactly 1 where 3/4·2^k <= |ξ_i| <= 2^k on nonzero
            // axes and |ξ_i| <= 1 on zero axes
            if (3.0..=4.0).contains(&x0) && x1 <= 1.0 {
                assert_eq!(v, 1.0, "({x0},{x1})");
            }
        });
    }

    #[test]
    fn overlap_sets_respect_band() {
        let g = grid(2, 256, std::f64::consts::PI);
        let cube = build_cube_partition(&g, 6).unwrap();
        let tensor = build_tensor_partition(&g, 6).unwrap();
        let sets = overlap_sets(&cube, &tensor).unwrap();

        let sq = sets.square.get(&vec![3, 1]).unwrap();
        assert!(sq.iter().all(|&j| (2..=4).contains(&j)));

        for kbar in sets.delta.get(&0).unwrap() {
            assert!(kbar.iter().max().unwrap() <= &1);
        }
        for (_, js) in sets.square.iter() {
            assert!(js.len() <= 3);
        }
    }

    #[test]
    fn dense_and_factored_reps_agree() {
        let g = grid(2, 64, std::f64::consts::PI);
        let factored = build_tensor_partition_with(&g, 2, 0).unwrap();
        let dense = build_tensor_partition_with(&g, 2, usize::MAX).unwrap();
        for (a, b) in factored.masks().iter().zip(dense.masks()) {
            let ma = a.materialize();
            let mb = b.materialize();
            assert_eq!(ma, mb);
        }
    }
}
