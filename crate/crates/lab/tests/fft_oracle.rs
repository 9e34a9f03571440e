//! The FFT pipeline against a direct-summation DFT on small 1-D grids.

mod common;

use besov_core::ExtendedExponent;
use besov_lab::grid::FrequencyGrid;
use besov_lab::norms::{iso_besov_norm, mixed_besov_norm};
use besov_lab::partition::{build_cube_partition, build_tensor_partition, MaskLabel};
use besov_lab::signal::{lp_of_slice, GridFunction};
use besov_lab::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{direct_forward_1d, direct_inverse_1d};

const PI: f64 = std::f64::consts::PI;

fn random_spectrum(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

#[test]
fn inverse_transform_matches_direct_summation() {
    let grid = FrequencyGrid::new(1, 64, PI).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let spectrum = random_spectrum(&mut rng, grid.len());
        let f = GridFunction::from_spectrum(grid, spectrum.clone()).unwrap();
        let direct = direct_inverse_1d(&grid, &spectrum);
        let scale: f64 = direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (a, b) in f.samples().iter().zip(&direct) {
            assert!((a - b).norm() <= 1e-10 * scale);
        }
    }
}

#[test]
fn forward_transform_matches_direct_summation() {
    let grid = FrequencyGrid::new(1, 64, 2.0 * PI).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples = random_spectrum(&mut rng, grid.len());
    let f = GridFunction::from_samples(grid, samples.clone()).unwrap();
    let direct = direct_forward_1d(&grid, &samples);
    let scale: f64 = direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (a, b) in f.spectrum().iter().zip(&direct) {
        assert!((a - b).norm() <= 1e-10 * scale);
    }
}

#[test]
fn apply_mask_matches_direct_convolution() {
    let grid = FrequencyGrid::new(1, 64, PI).unwrap();
    let cube = build_cube_partition(&grid, 4).unwrap();
    let mask = cube.mask_for_level(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let spectrum = random_spectrum(&mut rng, grid.len());
        let f = GridFunction::from_spectrum(grid, spectrum.clone()).unwrap();
        let masked = f.apply_mask(mask).unwrap();
        // direct route: multiply the sampled mask into the spectrum, then
        // direct-sum the inverse transform
        let masked_spectrum: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(i, z)| z * mask.value_at(i, &[i]))
            .collect();
        let direct = direct_inverse_1d(&grid, &masked_spectrum);
        let scale: f64 = direct.iter().map(|z| z.norm()).fold(1e-300, f64::max);
        for (a, b) in masked.samples().iter().zip(&direct) {
            assert!((a - b).norm() <= 1e-10 * scale);
        }
    }
}

#[test]
fn quasi_norm_pipelines_match_direct_oracle() {
    // both quasi-norm pipelines against per-block direct summation
    let grid = FrequencyGrid::new(1, 64, PI).unwrap();
    let cube = build_cube_partition(&grid, 4).unwrap();
    let tensor = build_tensor_partition(&grid, 4).unwrap();
    let p = ExtendedExponent::new(2.0).unwrap();
    let q = ExtendedExponent::new(1.5).unwrap();
    let t = 0.75;
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..50 {
        let spectrum = random_spectrum(&mut rng, grid.len());
        let f = GridFunction::from_spectrum(grid, spectrum.clone()).unwrap();
        let iso = iso_besov_norm(&f, t, p, q, &cube).unwrap();
        let mixed = mixed_besov_norm(&f, t, p, q, &tensor).unwrap();
        for (result, partition) in [(&iso, &cube), (&mixed, &tensor)] {
            let mut acc = 0.0f64;
            for (mask, block) in partition.masks().iter().zip(&result.blocks) {
                let masked: Vec<Complex64> = spectrum
                    .iter()
                    .enumerate()
                    .map(|(i, z)| z * mask.value_at(i, &[i]))
                    .collect();
                let direct = direct_inverse_1d(&grid, &masked);
                let direct_lp = lp_of_slice(&direct, grid.spatial_cell_volume(), p);
                assert!(
                    (direct_lp - block.block_lp).abs() <= 1e-9 * direct_lp.max(1e-12),
                    "block {:?}: {} vs {}",
                    block.label,
                    block.block_lp,
                    direct_lp
                );
                let exponent = match &block.label {
                    MaskLabel::Level(j) => *j as f64,
                    MaskLabel::Tensor(k) => k.iter().sum::<u32>() as f64,
                };
                acc += ((exponent * t).exp2() * direct_lp).powf(1.5);
            }
            let direct_value = acc.powf(1.0 / 1.5);
            assert!((direct_value - result.value).abs() <= 1e-9 * direct_value);
        }
    }
}
