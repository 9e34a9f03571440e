//! Sampled functions on periodic boxes, mask application and `L_p`
//! quasi-norms.
//!
//! A [`GridFunction`] is immutable; whichever side (samples or spectrum) it
//! was built from is authoritative and the other side is derived lazily and
//! cached, so the round-trip consistency invariant holds by construction.

use std::sync::{Arc, OnceLock};

use besov_core::agg::{pairwise_map_sum, pairwise_sum};
use besov_core::ExtendedExponent;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fft;
use crate::grid::FrequencyGrid;
use crate::partition::FrequencyMask;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("sample buffer has {got} entries, grid needs {need}")]
    LengthMismatch { got: usize, need: usize },
    #[error("grids differ: {0:?} vs {1:?}")]
    GridMismatch(FrequencyGrid, FrequencyGrid),
    #[error("frequency {xi} does not sit on the lattice (spacing {spacing})")]
    OffLattice { xi: f64, spacing: f64 },
    #[error("refinement schedule must be nonempty with strictly increasing n and non-decreasing R")]
    BadSchedule,
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
}

/// Complex samples of a function on `[-R, R)^d` with a cached spectrum.
#[derive(Debug)]
pub struct GridFunction {
    grid: FrequencyGrid,
    samples: OnceLock<Arc<Vec<Complex64>>>,
    spectrum: OnceLock<Arc<Vec<Complex64>>>,
    support: OnceLock<Arc<Vec<usize>>>,
}

impl Clone for GridFunction {
    fn clone(&self) -> Self {
        let out = Self::empty(self.grid);
        if let Some(s) = self.samples.get() {
            let _ = out.samples.set(s.clone());
        }
        if let Some(s) = self.spectrum.get() {
            let _ = out.spectrum.set(s.clone());
        }
        out
    }
}

impl GridFunction {
    fn empty(grid: FrequencyGrid) -> Self {
        Self {
            grid,
            samples: OnceLock::new(),
            spectrum: OnceLock::new(),
            support: OnceLock::new(),
        }
    }

    pub fn from_samples(grid: FrequencyGrid, samples: Vec<Complex64>) -> Result<Self, SignalError> {
        if samples.len() != grid.len() {
            return Err(SignalError::LengthMismatch {
                got: samples.len(),
                need: grid.len(),
            });
        }
        let f = Self::empty(grid);
        let _ = f.samples.set(Arc::new(samples));
        Ok(f)
    }

    pub fn from_spectrum(grid: FrequencyGrid, spectrum: Vec<Complex64>) -> Result<Self, SignalError> {
        if spectrum.len() != grid.len() {
            return Err(SignalError::LengthMismatch {
                got: spectrum.len(),
                need: grid.len(),
            });
        }
        let f = Self::empty(grid);
        let _ = f.spectrum.set(Arc::new(spectrum));
        Ok(f)
    }

    pub fn zero(grid: FrequencyGrid) -> Self {
        Self::from_spectrum(grid, vec![Complex64::default(); grid.len()]).unwrap()
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Spatial samples, synthesizing from the spectrum on first use.
    pub fn samples(&self) -> &Arc<Vec<Complex64>> {
        self.samples.get_or_init(|| {
            let mut data = (**self.spectrum.get().expect("constructor set one side")).clone();
            fft::inverse_nd(&self.grid, &mut data);
            Arc::new(data)
        })
    }

    /// Frequency coefficients, transforming the samples on first use.
    pub fn spectrum(&self) -> &Arc<Vec<Complex64>> {
        self.spectrum.get_or_init(|| {
            let mut data = (**self.samples.get().expect("constructor set one side")).clone();
            fft::forward_nd(&self.grid, &mut data);
            Arc::new(data)
        })
    }

    /// Flat indices of non-negligible spectrum entries, cached. Used to skip
    /// frequency blocks whose mask misses the spectrum entirely.
    pub fn spectral_support(&self) -> &Arc<Vec<usize>> {
        self.support.get_or_init(|| {
            let spec = self.spectrum();
            let mut idx = Vec::new();
            for (i, v) in spec.iter().enumerate() {
                if v.norm_sqr() > 0.0 {
                    idx.push(i);
                }
            }
            Arc::new(idx)
        })
    }

    /// Multiplies the spectrum pointwise by the mask.
    pub fn apply_mask(&self, mask: &FrequencyMask) -> Result<Self, SignalError> {
        if mask.grid() != &self.grid {
            return Err(SignalError::GridMismatch(*mask.grid(), self.grid));
        }
        let spec = self.spectrum();
        let mut out = vec![Complex64::default(); spec.len()];
        self.grid.for_each_index(|flat, axes| {
            out[flat] = spec[flat] * mask.value_at_axes(axes);
        });
        Self::from_spectrum(self.grid, out)
    }

    /// `L_p` quasi-norm over the box by the periodic Riemann rule;
    /// `max |f|` at `p = ∞`.
    pub fn lp_quasinorm(&self, p: ExtendedExponent) -> f64 {
        lp_of_slice(self.samples(), self.grid.spatial_cell_volume(), p)
    }

    /// Frequency-side squared `L_2` mass, `Σ |F|² · cell`.
    pub fn spectral_l2_sq(&self) -> f64 {
        pairwise_map_sum(self.spectrum().as_slice(), |z| z.norm_sqr()) * self.grid.freq_cell_volume()
    }

    /// Fraction of the spectral `L_2` mass lying outside the sup-norm cube
    /// of the given radius.
    pub fn uncovered_mass_ratio(&self, coverage_radius: f64) -> f64 {
        let spec = self.spectrum();
        let mut inside = Vec::with_capacity(spec.len());
        let mut outside = Vec::new();
        self.grid.for_each_index(|flat, axes| {
            let mut sup = 0.0f64;
            for &a in axes {
                sup = sup.max(self.grid.freq_at(a).abs());
            }
            if sup <= coverage_radius + 1e-12 {
                inside.push(spec[flat].norm_sqr());
            } else {
                outside.push(spec[flat].norm_sqr());
            }
        });
        let out = pairwise_sum(&outside);
        let total = out + pairwise_sum(&inside);
        if total == 0.0 {
            0.0
        } else {
            out / total
        }
    }
}

/// `L_p` of raw complex samples with the given cell volume.
pub fn lp_of_slice(vals: &[Complex64], cell_volume: f64, p: ExtendedExponent) -> f64 {
    match p {
        ExtendedExponent::Infinite => pairwise_fold_max(vals),
        ExtendedExponent::Finite(pv) => {
            let total = if pv == 2.0 {
                pairwise_map_sum(vals, |z| z.norm_sqr())
            } else if pv == 1.0 {
                pairwise_map_sum(vals, |z| z.norm())
            } else {
                pairwise_map_sum(vals, |z| z.norm().powf(pv))
            };
            let mass = total * cell_volume;
            if mass == 0.0 {
                0.0
            } else {
                mass.powf(1.0 / pv)
            }
        }
    }
}

fn pairwise_fold_max(vals: &[Complex64]) -> f64 {
    let mut best = 0.0f64;
    for v in vals {
        best = best.max(v.norm());
    }
    best
}

/// Fills the spectrum by evaluating `rule` at every lattice frequency.
pub fn synthesize_from_spectrum(
    grid: FrequencyGrid,
    rule: impl Fn(&[f64]) -> Complex64,
) -> GridFunction {
    let freqs: Vec<f64> = (0..grid.samples_per_axis()).map(|i| grid.freq_at(i)).collect();
    let mut data = vec![Complex64::default(); grid.len()];
    let mut coords = vec![0.0f64; grid.dimension()];
    grid.for_each_index(|flat, axes| {
        for (c, &a) in coords.iter_mut().zip(axes) {
            *c = freqs[a];
        }
        data[flat] = rule(&coords);
    });
    GridFunction::from_spectrum(grid, data).unwrap()
}

/// One separable term of a sparse spectrum: `coeff · Π_a profile_a(ξ_a)`,
/// with each axis profile given as `(axis index, value)` pairs.
#[derive(Clone, Debug)]
pub struct SeparableTerm {
    pub coeff: Complex64,
    pub axes: Vec<Vec<(usize, Complex64)>>,
}

/// Accumulates sparse separable terms into a spectrum.
pub fn synthesize_sparse_terms(
    grid: &FrequencyGrid,
    terms: &[SeparableTerm],
) -> Result<GridFunction, SignalError> {
    let strides = grid.strides();
    let mut data = vec![Complex64::default(); grid.len()];
    for term in terms {
        assert_eq!(term.axes.len(), grid.dimension());
        // nested sparse product, iterated axis by axis
        let mut partial: Vec<(usize, Complex64)> = vec![(0usize, term.coeff)];
        for (axis, profile) in term.axes.iter().enumerate() {
            let mut next = Vec::with_capacity(partial.len() * profile.len());
            for &(base, val) in &partial {
                for &(idx, pv) in profile {
                    debug_assert!(idx < grid.samples_per_axis());
                    next.push((base + idx * strides[axis], val * pv));
                }
            }
            partial = next;
        }
        for (flat, val) in partial {
            data[flat] += val;
        }
    }
    GridFunction::from_spectrum(*grid, data)
}

/// Amplitude that synthesizes to a unit-modulus exponential: placing this at
/// one lattice frequency yields samples `e^{i ξ·x}`.
pub fn unit_mode_amplitude(grid: &FrequencyGrid) -> f64 {
    (2.0 * std::f64::consts::PI).powf(grid.dimension() as f64 / 2.0) / grid.freq_cell_volume()
}

/// One rung of a refinement ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderLevel {
    pub n: usize,
    pub box_halfwidth: f64,
    pub value: f64,
}

/// Convergence record of a grid-refinement ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceMeta {
    pub levels: Vec<LadderLevel>,
    pub converged: bool,
    pub final_relative_delta: Option<f64>,
}

/// Runs `eval` over the schedule and reports the last value together with
/// the full ladder. Non-convergence is reported in the meta, not raised.
pub fn run_value_ladder<E>(
    mut eval: impl FnMut(usize, f64) -> Result<f64, E>,
    tol: f64,
    schedule: &[(usize, f64)],
) -> Result<(f64, ConvergenceMeta), E> {
    assert!(!schedule.is_empty());
    let mut levels = Vec::with_capacity(schedule.len());
    let mut last: Option<f64> = None;
    let mut delta = None;
    for &(n, r) in schedule {
        let value = eval(n, r)?;
        levels.push(LadderLevel {
            n,
            box_halfwidth: r,
            value,
        });
        if let Some(prev) = last {
            let scale = value.abs().max(f64::MIN_POSITIVE);
            delta = Some((value - prev).abs() / scale);
        }
        last = Some(value);
    }
    let converged = matches!(delta, Some(d) if d <= tol);
    Ok((
        last.unwrap(),
        ConvergenceMeta {
            levels,
            converged,
            final_relative_delta: delta,
        },
    ))
}

/// Evaluates the `L_p` quasi-norm of `generator(n, R)` over the refinement
/// schedule until two successive values agree within `tol` relatively.
pub fn refine_until_converged(
    mut generator: impl FnMut(usize, f64) -> Result<GridFunction, SignalError>,
    p: ExtendedExponent,
    tol: f64,
    schedule: &[(usize, f64)],
) -> Result<(f64, ConvergenceMeta), SignalError> {
    if schedule.is_empty() {
        return Err(SignalError::BadSchedule);
    }
    for w in schedule.windows(2) {
        if w[1].0 <= w[0].0 || w[1].1 < w[0].1 - 1e-12 {
            return Err(SignalError::BadSchedule);
        }
    }
    run_value_ladder(|n, r| generator(n, r).map(|f| f.lp_quasinorm(p)), tol, schedule)
}
