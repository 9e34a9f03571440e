//! Multidimensional FFTs with the symmetric `(2π)^{-d/2}` normalization.
//!
//! The forward transform maps spatial samples on `[-R, R)^d` to continuous
//! Fourier coefficients sampled on the frequency lattice, i.e. it includes
//! the Riemann cell volume. Because the spatial origin sits mid-array, each
//! axis contributes an alternating sign `(-1)^k` that is folded in here so
//! callers never see it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::FrequencyGrid;

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().unwrap();
    cache
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Runs the 1-D transform along every axis of the row-major array.
fn transform_all_axes(grid: &FrequencyGrid, data: &mut [Complex64], inverse: bool) {
    let n = grid.samples_per_axis();
    let d = grid.dimension();
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // last axis: contiguous lines
    for line in data.chunks_exact_mut(n) {
        fft.process_with_scratch(line, &mut scratch);
    }

    // remaining axes: gather into a line buffer
    let strides = grid.strides();
    let mut line = vec![Complex64::default(); n];
    for axis in (0..d.saturating_sub(1)).rev() {
        let stride = strides[axis];
        let block = stride * n;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + i * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, slot) in line.iter().enumerate() {
                    data[start + i * stride] = *slot;
                }
            }
        }
    }
}

/// Multiplies entry `k` by `(-1)^{k_1 + … + k_d}`.
fn apply_alternating_sign(grid: &FrequencyGrid, data: &mut [Complex64]) {
    let n = grid.samples_per_axis();
    let d = grid.dimension();
    if d == 1 {
        for (i, v) in data.iter_mut().enumerate() {
            if i & 1 == 1 {
                *v = -*v;
            }
        }
        return;
    }
    let row = n;
    for (chunk_idx, chunk) in data.chunks_exact_mut(row).enumerate() {
        // parity of the leading d-1 indices
        let mut lead = chunk_idx;
        let mut parity = 0usize;
        while lead > 0 {
            parity ^= lead & 1;
            lead /= n;
        }
        for (i, v) in chunk.iter_mut().enumerate() {
            if (parity ^ (i & 1)) == 1 {
                *v = -*v;
            }
        }
    }
}

/// Spatial samples → frequency coefficients, in place.
pub fn forward_nd(grid: &FrequencyGrid, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), grid.len());
    transform_all_axes(grid, data, false);
    let d = grid.dimension() as i32;
    let scale = (2.0 * std::f64::consts::PI).powf(-0.5 * d as f64)
        * grid.spatial_spacing().powi(d);
    apply_alternating_sign(grid, data);
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Frequency coefficients → spatial samples, in place.
pub fn inverse_nd(grid: &FrequencyGrid, data: &mut [Complex64]) {
    debug_assert_eq!(data.len(), grid.len());
    apply_alternating_sign(grid, data);
    transform_all_axes(grid, data, true);
    let d = grid.dimension() as i32;
    let scale = (2.0 * std::f64::consts::PI).powf(-0.5 * d as f64)
        * grid.freq_spacing().powi(d);
    for v in data.iter_mut() {
        *v *= scale;
    }
}
