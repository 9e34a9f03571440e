//! Least-squares growth-exponent fits for witness ratio tables.
//!
//! The divergence arguments behind the non-embedding claims are reproduced
//! numerically as growth rates: a ratio column is fitted either as
//! `C · ℓ^e` (power law) or `C · 2^{e ℓ}` (exponential in the level), and
//! the fitted exponent is compared against the predicted rate.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthModel {
    /// `ratio ≈ C · ℓ^exponent`; fits `log ratio` against `log ℓ`.
    PowerInEll,
    /// `ratio ≈ C · 2^{exponent · ℓ}`; fits `log ratio` against `ℓ · log 2`.
    ExponentialBase2InEll,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub model: GrowthModel,
    pub exponent: f64,
    /// Natural-log intercept, i.e. `ln C`.
    pub intercept: f64,
    /// Worst absolute residual in log space.
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FitError {
    TooFewRows { have: usize, need: usize },
    NonPositiveRatio { ell: f64, ratio: f64 },
}

impl core::fmt::Display for FitError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::TooFewRows { have, need } => {
                write!(f, "growth fit needs at least {need} rows, got {have}")
            }
            Self::NonPositiveRatio { ell, ratio } => {
                write!(f, "ratio must be positive to fit, got {ratio} at ell={ell}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FitError {}

/// Fits `(ℓ, ratio)` rows with the requested model. Needs at least 4 rows.
pub fn fit_growth(rows: &[(f64, f64)], model: GrowthModel) -> Result<GrowthFit, FitError> {
    if rows.len() < 4 {
        return Err(FitError::TooFewRows {
            have: rows.len(),
            need: 4,
        });
    }
    let mut xs = Vec::with_capacity(rows.len());
    let mut ys = Vec::with_capacity(rows.len());
    for &(ell, ratio) in rows {
        if !(ratio > 0.0) {
            return Err(FitError::NonPositiveRatio { ell, ratio });
        }
        let x = match model {
            GrowthModel::PowerInEll => libm::log(ell),
            GrowthModel::ExponentialBase2InEll => ell * core::f64::consts::LN_2,
        };
        xs.push(x);
        ys.push(libm::log(ratio));
    }
    let n = xs.len() as f64;
    let mean_x = crate::agg::pairwise_sum(&xs) / n;
    let mean_y = crate::agg::pairwise_sum(&ys) / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..xs.len() {
        let dx = xs[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (ys[i] - mean_y);
    }
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let mut max_residual = 0.0f64;
    for i in 0..xs.len() {
        let r = (ys[i] - (exponent * xs[i] + intercept)).abs();
        max_residual = max_residual.max(r);
    }
    Ok(GrowthFit {
        model,
        exponent,
        intercept,
        max_residual,
    })
}
