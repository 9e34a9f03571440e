//! Uniform periodic-box grids and their frequency lattices.
//!
//! The physical domain is `[-R, R)^d` sampled at `n` points per axis; the
//! matching frequency lattice has spacing `π/R` and covers the Nyquist cube
//! `[-nπ/(2R), nπ/(2R))^d`. Arrays are stored row-major (last axis fastest)
//! with frequencies in natural FFT order: axis index `i` carries the signed
//! index `i` for `i < n/2` and `i - n` otherwise.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("samples per axis must be a power of two >= 2, got {0}")]
    BadSampleCount(usize),
    #[error("box halfwidth must be positive and finite, got {0}")]
    BadHalfwidth(f64),
    #[error("dimension must be between 1 and 4, got {0}")]
    BadDimension(usize),
    #[error("grid too large: {d} axes of {n} samples overflow addressable size")]
    TooLarge { d: usize, n: usize },
}

/// A `d`-dimensional periodic sampling grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    d: usize,
    n: usize,
    box_halfwidth: f64,
}

impl FrequencyGrid {
    pub fn new(d: usize, n: usize, box_halfwidth: f64) -> Result<Self, GridError> {
        if !(1..=4).contains(&d) {
            return Err(GridError::BadDimension(d));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(GridError::BadSampleCount(n));
        }
        if !(box_halfwidth > 0.0) || !box_halfwidth.is_finite() {
            return Err(GridError::BadHalfwidth(box_halfwidth));
        }
        let mut len = 1usize;
        for _ in 0..d {
            len = len.checked_mul(n).ok_or(GridError::TooLarge { d, n })?;
        }
        if len.checked_mul(16).is_none() {
            return Err(GridError::TooLarge { d, n });
        }
        Ok(Self {
            d,
            n,
            box_halfwidth,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn samples_per_axis(&self) -> usize {
        self.n
    }

    pub fn box_halfwidth(&self) -> f64 {
        self.box_halfwidth
    }

    /// Total number of lattice points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequency lattice spacing `π/R`.
    pub fn freq_spacing(&self) -> f64 {
        std::f64::consts::PI / self.box_halfwidth
    }

    /// Largest frequency magnitude representable per axis, `nπ/(2R)`.
    pub fn nyquist(&self) -> f64 {
        self.freq_spacing() * (self.n / 2) as f64
    }

    /// Spatial lattice spacing `2R/n`.
    pub fn spatial_spacing(&self) -> f64 {
        2.0 * self.box_halfwidth / self.n as f64
    }

    pub fn spatial_cell_volume(&self) -> f64 {
        self.spatial_spacing().powi(self.d as i32)
    }

    pub fn freq_cell_volume(&self) -> f64 {
        self.freq_spacing().powi(self.d as i32)
    }

    /// Signed integer index for axis position `i` in natural FFT order.
    pub fn signed_index(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Frequency coordinate at axis position `i`.
    pub fn freq_at(&self, i: usize) -> f64 {
        self.signed_index(i) as f64 * self.freq_spacing()
    }

    /// Spatial coordinate at axis position `m`.
    pub fn coord_at(&self, m: usize) -> f64 {
        -self.box_halfwidth + m as f64 * self.spatial_spacing()
    }

    /// Axis position holding frequency `xi`, if it lies on the lattice.
    pub fn freq_index(&self, xi: f64) -> Option<usize> {
        let ratio = xi / self.freq_spacing();
        let rounded = ratio.round();
        if (ratio - rounded).abs() > 1e-9 {
            return None;
        }
        let s = rounded as i64;
        let half = (self.n / 2) as i64;
        if s < -half || s >= half {
            return None;
        }
        Some(if s >= 0 { s as usize } else { (s + self.n as i64) as usize })
    }

    /// Row-major strides, axis 0 slowest.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.d];
        for a in (0..self.d.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * self.n;
        }
        strides
    }

    /// Decodes a flat index into per-axis positions.
    pub fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.d];
        for a in (0..self.d).rev() {
            idx[a] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    /// Walks the whole lattice in flat order, handing the per-axis positions
    /// to the visitor without re-deriving them by division.
    pub fn for_each_index(&self, mut visit: impl FnMut(usize, &[usize])) {
        let mut idx = vec![0usize; self.d];
        let len = self.len();
        for flat in 0..len {
            visit(flat, &idx);
            for a in (0..self.d).rev() {
                idx[a] += 1;
                if idx[a] < self.n {
                    break;
                }
                idx[a] = 0;
            }
        }
    }
}
