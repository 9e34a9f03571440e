//! Deterministic reductions and `ℓ_q` aggregation of block ledgers.
//!
//! Sums use a fixed pairwise order so results are bit-identical regardless
//! of how the work is scheduled.

use alloc::vec::Vec;

use crate::exponent::ExtendedExponent;
use crate::tol;

const PAIRWISE_LEAF: usize = 16;

/// Pairwise (cascade) summation with a fixed association order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_LEAF {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise summation of `f(x)` over a slice without materializing the
/// mapped values; same association order as [`pairwise_sum`].
pub fn pairwise_map_sum<T>(xs: &[T], f: impl Fn(&T) -> f64 + Copy) -> f64 {
    if xs.len() <= PAIRWISE_LEAF {
        let mut acc = 0.0;
        for x in xs {
            acc += f(x);
        }
        return acc;
    }
    let mid = xs.len() / 2;
    pairwise_map_sum(&xs[..mid], f) + pairwise_map_sum(&xs[mid..], f)
}

/// `ℓ_q` aggregation of nonnegative contributions, with the supremum
/// modification at `q = ∞`.
///
/// Entries below the underflow floor are treated as exact zeros so that
/// `q < 1` power sums are not polluted by denormal noise.
pub fn lq_aggregate(contributions: &[f64], q: ExtendedExponent) -> f64 {
    match q {
        ExtendedExponent::Infinite => contributions.iter().copied().fold(0.0, f64::max),
        ExtendedExponent::Finite(qv) => {
            let powered: Vec<f64> = contributions
                .iter()
                .map(|&c| {
                    if c <= tol::BLOCK_UNDERFLOW {
                        0.0
                    } else {
                        libm::pow(c, qv)
                    }
                })
                .collect();
            let total = pairwise_sum(&powered);
            if total == 0.0 {
                0.0
            } else {
                libm::pow(total, 1.0 / qv)
            }
        }
    }
}
