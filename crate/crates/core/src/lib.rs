//! Parameter-space logic for isotropic and dominating-mixed Besov scales.
//!
//! This crate is the allocation-only core of the workspace: extended
//! exponents, embedding verdict tables, region diagrams, the smooth step
//! used to generate dyadic decompositions of unity, deterministic ledger
//! reductions and growth-exponent fits. Everything here is pure math over
//! value types; IO, grids and FFTs live in the companion `besov-lab` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod agg;
pub mod exponent;
pub mod fit;
pub mod params;
pub mod region;
pub mod smooth;
pub mod tol;

pub use exponent::ExtendedExponent;
pub use fit::{fit_growth, FitError, GrowthFit, GrowthModel};
pub use params::{
    classical_embedding, embed_iso_into_mixed, embed_mixed_into_iso, make_params, optimal_space,
    DomainError, OptimalityDirection, ParameterPoint, SmoothnessScale, Verdict, VerdictStatus,
};
pub use region::{region_diagram, Figure, LabeledRegion, RegionDiagram};
pub use smooth::SmoothStep;
