//! Extended integrability/summability exponents in `(0, ∞]`.

use core::fmt;

use serde::{Deserialize, Serialize};

use crate::tol;

/// An exponent from `(0, ∞]` as it appears in `L_p` and `ℓ_q` scales.
///
/// The reciprocal of [`ExtendedExponent::Infinite`] is `0`, and the
/// reciprocal map is strictly decreasing, which is what the critical-line
/// geometry is drawn in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExtendedExponent {
    Finite(f64),
    Infinite,
}

impl ExtendedExponent {
    /// Validates `v > 0`; `f64::INFINITY` maps to [`ExtendedExponent::Infinite`].
    pub fn new(v: f64) -> Result<Self, crate::params::DomainError> {
        if v.is_nan() || v <= 0.0 {
            return Err(crate::params::DomainError::NonPositiveExponent(v));
        }
        if v.is_infinite() {
            Ok(Self::Infinite)
        } else {
            Ok(Self::Finite(v))
        }
    }

    pub const INFINITY: Self = Self::Infinite;

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }

    /// The exponent as an `f64`, `f64::INFINITY` for the infinite case.
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(v) => v,
            Self::Infinite => f64::INFINITY,
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Self::Finite(v) => 1.0 / v,
            Self::Infinite => 0.0,
        }
    }

    /// `min(p, 1)`, the convolution exponent `u` of the multiplier bounds.
    pub fn min_with_one(self) -> f64 {
        match self {
            Self::Finite(v) => v.min(1.0),
            Self::Infinite => 1.0,
        }
    }

    /// Conjugate exponent: `p' = p/(p-1)` for `1 < p < ∞`, `∞` for `p <= 1`,
    /// `1` for `p = ∞`.
    pub fn conjugate(self) -> Self {
        match self {
            Self::Infinite => Self::Finite(1.0),
            Self::Finite(v) => {
                if tol::fle(v, 1.0) {
                    Self::Infinite
                } else {
                    Self::Finite(v / (v - 1.0))
                }
            }
        }
    }

    pub fn le(self, bound: f64) -> bool {
        match self {
            Self::Finite(v) => tol::fle(v, bound),
            Self::Infinite => bound.is_infinite(),
        }
    }

    pub fn ge(self, bound: f64) -> bool {
        match self {
            Self::Finite(v) => tol::fge(v, bound),
            Self::Infinite => true,
        }
    }

    pub fn eq_value(self, bound: f64) -> bool {
        tol::feq(self.value(), bound)
    }
}

impl fmt::Display for ExtendedExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}
