//! Numerical laboratory for isotropic and dominating-mixed Besov quasi-norms.
//!
//! Functions live on uniform periodic-box grids; smooth dyadic frequency
//! masks are applied through FFTs; the two quasi-norms are evaluated
//! blockwise with full per-block ledgers; witness families reproduce the
//! known norm asymptotics as measurable growth rates. The embedding decision
//! tables themselves live in [`besov_core`].

pub mod config;
pub mod container;
pub mod fft;
pub mod grid;
pub mod harness;
pub mod norms;
pub mod partition;
pub mod signal;
pub mod witness;

pub use besov_core as core;
pub use besov_core::ExtendedExponent;
pub use grid::FrequencyGrid;
pub use num_complex::Complex64;
pub use signal::GridFunction;
