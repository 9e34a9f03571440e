//! Shared helpers for the integration suites: a direct-summation DFT that
//! stays independent of the FFT pipeline it checks.

use besov_lab::grid::FrequencyGrid;
use besov_lab::Complex64;

const INV_SQRT_2PI: f64 = 0.3989422804014327;

/// O(n²) inverse transform: frequency coefficients to spatial samples.
pub fn direct_inverse_1d(grid: &FrequencyGrid, spectrum: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(grid.dimension(), 1);
    let n = grid.samples_per_axis();
    let norm = INV_SQRT_2PI * grid.freq_cell_volume();
    (0..n)
        .map(|m| {
            let x = grid.coord_at(m);
            let mut acc = Complex64::default();
            for (k, coeff) in spectrum.iter().enumerate() {
                let xi = grid.freq_at(k);
                acc += coeff * Complex64::new(0.0, xi * x).exp();
            }
            acc * norm
        })
        .collect()
}

/// O(n²) forward transform: spatial samples to frequency coefficients.
pub fn direct_forward_1d(grid: &FrequencyGrid, samples: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(grid.dimension(), 1);
    let n = grid.samples_per_axis();
    let norm = INV_SQRT_2PI * grid.spatial_cell_volume();
    (0..n)
        .map(|k| {
            let xi = grid.freq_at(k);
            let mut acc = Complex64::default();
            for (m, val) in samples.iter().enumerate() {
                let x = grid.coord_at(m);
                acc += val * Complex64::new(0.0, -xi * x).exp();
            }
            acc * norm
        })
        .collect()
}

/// Riemann `L_p` over the box, naive order, for cross-checking reductions.
pub fn naive_lp(samples: &[Complex64], cell: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let total: f64 = samples.iter().map(|z| z.norm().powf(p)).sum();
    (total * cell).powf(1.0 / p)
}
