//! Parameter points and the embedding decision tables.
//!
//! The two verdict functions answer, for a parameter point `(t, p, q, d)`,
//! whether the dominating-mixed space embeds into the isotropic space of the
//! same smoothness (`embed_mixed_into_iso`) and whether the isotropic space
//! of smoothness `t·d` embeds into the mixed space of smoothness `t`
//! (`embed_iso_into_mixed`). Every verdict cites the clause that decides it;
//! points the literature leaves open are reported as such, never guessed.

use alloc::string::String;
use alloc::string::ToString;

use core::fmt;

use serde::{Deserialize, Serialize};

use crate::exponent::ExtendedExponent;
use crate::tol;

/// Clause cited when `d = 1` collapses both scales to the same space.
pub const CLAUSE_DIMENSION_ONE: &str = "Remark 2.4(iii): spaces coincide";

#[derive(Clone, Debug, PartialEq)]
pub enum DomainError {
    NonPositiveExponent(f64),
    NonFiniteSmoothness(f64),
    ZeroDimension,
    DimensionMismatch { left: u32, right: u32 },
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositiveExponent(v) => {
                write!(f, "exponent must be positive or infinite, got {v}")
            }
            Self::NonFiniteSmoothness(v) => write!(f, "smoothness must be finite, got {v}"),
            Self::ZeroDimension => write!(f, "dimension must be at least 1"),
            Self::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DomainError {}

/// A point `(t, p, q, d)` of the parameter domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParameterPoint {
    pub t: f64,
    pub p: ExtendedExponent,
    pub q: ExtendedExponent,
    pub d: u32,
}

/// Validating constructor; `p` and `q` may be `f64::INFINITY`.
pub fn make_params(t: f64, p: f64, q: f64, d: u32) -> Result<ParameterPoint, DomainError> {
    if !t.is_finite() {
        return Err(DomainError::NonFiniteSmoothness(t));
    }
    if d < 1 {
        return Err(DomainError::ZeroDimension);
    }
    Ok(ParameterPoint {
        t,
        p: ExtendedExponent::new(p)?,
        q: ExtendedExponent::new(q)?,
        d,
    })
}

impl ParameterPoint {
    pub fn new(
        t: f64,
        p: ExtendedExponent,
        q: ExtendedExponent,
        d: u32,
    ) -> Result<Self, DomainError> {
        if !t.is_finite() {
            return Err(DomainError::NonFiniteSmoothness(t));
        }
        if d < 1 {
            return Err(DomainError::ZeroDimension);
        }
        Ok(Self { t, p, q, d })
    }

    pub fn with_t(self, t: f64) -> Self {
        Self { t, ..self }
    }
}

/// Outcome vocabulary for an embedding question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictStatus {
    /// The queried embedding holds.
    Embeds,
    /// The queried embedding provably fails; the reverse is not settled.
    FailsToEmbed,
    /// The queried embedding fails but the reverse inclusion holds.
    ReverseEmbeds,
    /// Both inclusions provably fail.
    NotComparable,
    /// The relationship at this point is not settled by the known results.
    NotCoveredByPaper,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Embeds => "Embeds",
            Self::FailsToEmbed => "FailsToEmbed",
            Self::ReverseEmbeds => "ReverseEmbeds",
            Self::NotComparable => "NotComparable",
            Self::NotCoveredByPaper => "NotCoveredByPaper",
        };
        f.write_str(s)
    }
}

/// An embedding decision together with the clause that justifies it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub clause: String,
}

impl Verdict {
    fn new(status: VerdictStatus, clause: &str) -> Self {
        Self {
            status,
            clause: clause.to_string(),
        }
    }

    fn not_covered() -> Self {
        Self {
            status: VerdictStatus::NotCoveredByPaper,
            clause: String::new(),
        }
    }
}

/// Does `S^t_{p,q}B(R^d)` embed into `B^t_{p,q}(R^d)`?
pub fn embed_mixed_into_iso(pt: &ParameterPoint) -> Verdict {
    use VerdictStatus::*;

    if pt.d == 1 {
        return Verdict::new(Embeds, CLAUSE_DIMENSION_ONE);
    }
    let t = pt.t;
    let q = pt.q;

    if tol::fgt(t, 0.0) {
        return Verdict::new(Embeds, "Thm 3.1: t>0");
    }

    if tol::feq(t, 0.0) {
        return match pt.p {
            ExtendedExponent::Finite(pv) => {
                if q.le(pv.min(2.0)) {
                    Verdict::new(Embeds, "Thm 3.1: q ≤ min(p,2)")
                } else if tol::flt(pv, 1.0) {
                    // same pair of spaces at t = 0, so the mixed-scale
                    // statement applies verbatim
                    Verdict::new(NotComparable, "Prop 3.5(iv)")
                } else if tol::feq(pv, 1.0) {
                    if q.is_infinite() {
                        Verdict::new(ReverseEmbeds, "Thm 3.4: t = 1/p − 1, q = ∞")
                    } else {
                        Verdict::new(NotComparable, "Prop 3.3(iii)")
                    }
                } else if q.ge(pv.max(2.0)) {
                    Verdict::new(ReverseEmbeds, "Thm 3.4: max(2,p) ≤ q")
                } else {
                    Verdict::new(NotComparable, "Prop 3.3(ii)")
                }
            }
            ExtendedExponent::Infinite => {
                if q.le(1.0) {
                    Verdict::new(Embeds, "Thm 3.1: p=∞, q ≤ 1")
                } else if q.is_infinite() {
                    Verdict::new(ReverseEmbeds, "Thm 3.4: max(2,p) ≤ q")
                } else {
                    Verdict::new(NotComparable, "Prop 3.3(iv)")
                }
            }
        };
    }

    // t < 0
    if pt.p.ge(1.0) {
        Verdict::new(ReverseEmbeds, "Prop 3.3(i)")
    } else {
        Verdict::new(NotComparable, "Prop 3.3(v)")
    }
}

/// Does `B^{t d}_{p,q}(R^d)` embed into `S^t_{p,q}B(R^d)`?
pub fn embed_iso_into_mixed(pt: &ParameterPoint) -> Verdict {
    use VerdictStatus::*;

    if pt.d == 1 {
        return Verdict::new(Embeds, CLAUSE_DIMENSION_ONE);
    }
    let t = pt.t;
    let q = pt.q;
    let rp = pt.p.reciprocal();
    let critical = (rp - 1.0).max(0.0);

    if tol::fgt(t, critical) {
        return Verdict::new(Embeds, "Thm 3.4: t > max(0, 1/p − 1)");
    }
    if tol::feq(t, 0.0) && pt.p.ge(1.0) && !pt.p.eq_value(1.0) {
        let floor = match pt.p {
            ExtendedExponent::Finite(pv) => pv.max(2.0),
            ExtendedExponent::Infinite => f64::INFINITY,
        };
        if q.ge(floor) {
            return Verdict::new(Embeds, "Thm 3.4: max(2,p) ≤ q");
        }
    }
    if pt.p.le(1.0) && tol::feq(t, rp - 1.0) && q.is_infinite() {
        return Verdict::new(Embeds, "Thm 3.4: t = 1/p − 1, q = ∞");
    }

    if tol::flt(t, 0.0) {
        return Verdict::new(ReverseEmbeds, "Prop 3.5(i)");
    }

    if tol::feq(t, 0.0) {
        return match pt.p {
            ExtendedExponent::Finite(pv) if tol::flt(pv, 1.0) => {
                if q.le(pv) {
                    Verdict::new(ReverseEmbeds, "Prop 3.5(iii)")
                } else {
                    Verdict::new(NotComparable, "Prop 3.5(iv)")
                }
            }
            ExtendedExponent::Finite(pv) if tol::feq(pv, 1.0) => {
                if q.le(1.0) {
                    Verdict::new(ReverseEmbeds, "Thm 3.1: q ≤ min(p,2)")
                } else {
                    // q = ∞ already returned Embeds above
                    Verdict::new(NotComparable, "Prop 3.3(iii)")
                }
            }
            ExtendedExponent::Finite(pv) => {
                if q.le(pv.min(2.0)) {
                    Verdict::new(ReverseEmbeds, "Thm 3.1: q ≤ min(p,2)")
                } else {
                    Verdict::new(NotComparable, "Prop 3.3(ii)")
                }
            }
            ExtendedExponent::Infinite => {
                if q.le(1.0) {
                    Verdict::new(ReverseEmbeds, "Thm 3.1: p=∞, q ≤ 1")
                } else {
                    Verdict::new(NotComparable, "Prop 3.3(iv)")
                }
            }
        };
    }

    // 0 < t <= critical, which forces p < 1
    if tol::flt(t, critical) {
        return Verdict::new(NotComparable, "Prop 3.5(ii)");
    }

    // on the critical segment t = 1/p - 1 with q < ∞: forward fails but the
    // reverse inclusion is not settled
    Verdict::not_covered()
}

/// Which smoothness offset the classical one-scale embedding uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothnessScale {
    /// Isotropic scale: offset `d/p`.
    Iso,
    /// Dominating-mixed scale: offset `1/p`.
    Mixed,
}

/// Classical embedding of one scale into itself: source into destination.
///
/// With `δ = d` (isotropic) or `δ = 1` (mixed), the embedding holds iff
/// `p_src <= p_dst` and either `t_dst − δ/p_dst < t_src − δ/p_src` strictly
/// or both sides are equal and `q_src <= q_dst`.
pub fn classical_embedding(
    src: &ParameterPoint,
    dst: &ParameterPoint,
    family: SmoothnessScale,
) -> Result<bool, DomainError> {
    if src.d != dst.d {
        return Err(DomainError::DimensionMismatch {
            left: src.d,
            right: dst.d,
        });
    }
    // p may not decrease along an embedding
    if tol::fgt(src.p.value(), dst.p.value()) {
        return Ok(false);
    }
    let offset = match family {
        SmoothnessScale::Iso => src.d as f64,
        SmoothnessScale::Mixed => 1.0,
    };
    let lhs_src = src.t - offset * src.p.reciprocal();
    let lhs_dst = dst.t - offset * dst.p.reciprocal();
    if tol::flt(lhs_dst, lhs_src) {
        return Ok(true);
    }
    if tol::feq(lhs_dst, lhs_src) {
        return Ok(tol::fle(src.q.value(), dst.q.value()));
    }
    Ok(false)
}

/// The extremal-space questions the optimality statements answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OptimalityDirection {
    /// Largest mixed source embedding into the iso target `B^t_{p,q}`:
    /// `S^t_{p,q}B`.
    MixedIntoIso,
    /// Largest iso source embedding into the mixed target `S^t_{p,q}B`:
    /// `B^{td}_{p,q}`.
    IsoIntoMixedSource,
    /// Smallest mixed target receiving the iso source `B^{td}_{p,q}`:
    /// `S^t_{p,q}B`.
    IsoIntoMixedTarget,
}

/// Returns the extremal parameter point named by the optimality statements.
///
/// The returned point is a mixed-scale space for `MixedIntoIso` and
/// `IsoIntoMixedTarget`, and an isotropic space for `IsoIntoMixedSource`.
pub fn optimal_space(target: &ParameterPoint, direction: OptimalityDirection) -> ParameterPoint {
    match direction {
        OptimalityDirection::MixedIntoIso => *target,
        OptimalityDirection::IsoIntoMixedSource => target.with_t(target.t * target.d as f64),
        OptimalityDirection::IsoIntoMixedTarget => target.with_t(target.t / target.d as f64),
    }
}
