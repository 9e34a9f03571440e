//! Comparison tolerances shared across the workspace.
//!
//! Clause membership on the critical lines must be reproducible, so every
//! exponent comparison goes through these helpers instead of raw `==`/`<`.
//! Inputs that are exactly representable in binary (the dyadic rationals the
//! decision tables are quoted at) compare exactly; everything else falls back
//! to the documented absolute tolerance.

/// Absolute tolerance for smoothness/exponent comparisons.
pub const EXPONENT_CMP: f64 = 1e-12;

/// Partition-of-unity defect allowed on the covered cube.
pub const PARTITION_UNITY: f64 = 1e-12;

/// Threshold below which a mask sample counts as zero support.
pub const SUPPORT_ZERO: f64 = 1e-14;

/// Block magnitudes below this are recorded as exact zeros in norm ledgers.
pub const BLOCK_UNDERFLOW: f64 = 1e-300;

/// `a == b` up to [`EXPONENT_CMP`]; infinities of the same sign are equal.
pub fn feq(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= EXPONENT_CMP
}

/// `a <= b` up to tolerance.
pub fn fle(a: f64, b: f64) -> bool {
    a <= b || feq(a, b)
}

/// `a < b` strictly, i.e. not within tolerance of equality.
pub fn flt(a: f64, b: f64) -> bool {
    a < b && !feq(a, b)
}

/// `a >= b` up to tolerance.
pub fn fge(a: f64, b: f64) -> bool {
    a >= b || feq(a, b)
}

/// `a > b` strictly, i.e. not within tolerance of equality.
pub fn fgt(a: f64, b: f64) -> bool {
    a > b && !feq(a, b)
}
