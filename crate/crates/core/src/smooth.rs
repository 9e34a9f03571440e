//! The smooth step generating all dyadic decompositions of unity, plus the
//! compactly supported bump it is mollified from.

use alloc::vec::Vec;

/// The standard bump `exp(-1/(1-u^2))` on `(-1, 1)`, zero elsewhere.
pub fn bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        libm::exp(-1.0 / (1.0 - u * u))
    } else {
        0.0
    }
}

/// An even bump supported on `[center - halfwidth, center + halfwidth]`
/// around `|x| = center`, used as the shell profile of the tensor witnesses.
pub fn even_shell_bump(x: f64, center: f64, halfwidth: f64) -> f64 {
    bump((x.abs() - center) / halfwidth)
}

/// Infinitely smooth step: `1` for `r <= 1`, `0` for `r >= 3/2`, strictly
/// decreasing in between.
///
/// The transition is the normalized antiderivative of [`bump`], tabulated
/// by Simpson prefix sums and read back through cubic Hermite interpolation
/// with the analytic derivative. The interpolant deviates from the true
/// antiderivative at the 1e-15 level, so the masks built from it keep the
/// rapid kernel decay the quasi-norm tails rely on; both plateaus are
/// reproduced exactly, which the telescoping and support invariants need.
#[derive(Clone, Debug)]
pub struct SmoothStep {
    table: Vec<f64>,
    total: f64,
}

const TABLE_PANELS: usize = 8192;

impl SmoothStep {
    pub fn new() -> Self {
        // Simpson prefix sums of the bump over [-1, 1]
        let n = TABLE_PANELS;
        let h = 2.0 / n as f64;
        let mut table = Vec::with_capacity(n + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for i in 0..n {
            let a = -1.0 + i as f64 * h;
            let m = a + 0.5 * h;
            let b = a + h;
            acc += h / 6.0 * (bump(a) + 4.0 * bump(m) + bump(b));
            table.push(acc);
        }
        let total = acc;
        for v in table.iter_mut() {
            *v /= total;
        }
        Self { table, total }
    }

    /// Normalized antiderivative of the bump: `0` at `-1`, `1` at `+1`.
    fn ramp(&self, z: f64) -> f64 {
        if z <= -1.0 {
            return 0.0;
        }
        if z >= 1.0 {
            return 1.0;
        }
        let dz = 2.0 / TABLE_PANELS as f64;
        let pos = (z + 1.0) / dz;
        let idx = (pos as usize).min(TABLE_PANELS - 1);
        let s = pos - idx as f64;
        let z0 = -1.0 + idx as f64 * dz;
        // cubic Hermite with the exact derivative ramp' = bump/total
        let y0 = self.table[idx];
        let y1 = self.table[idx + 1];
        let m0 = bump(z0) / self.total * dz;
        let m1 = bump(z0 + dz) / self.total * dz;
        let s2 = s * s;
        let s3 = s2 * s;
        let v = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        v.clamp(0.0, 1.0)
    }

    /// The step value at radius `r >= 0`.
    pub fn value(&self, r: f64) -> f64 {
        if r <= 1.0 {
            1.0
        } else if r >= 1.5 {
            0.0
        } else {
            1.0 - self.ramp(4.0 * (r - 1.25))
        }
    }
}

impl Default for SmoothStep {
    fn default() -> Self {
        Self::new()
    }
}
