//! Exact and numerical machinery around the Harish-Chandra–Itzykson–Zuber
//! integral
//!
//! ```text
//! ∫_U exp Tr(u A u⁻¹ B) du = ∏_{p=1}^{n−1} p! · det[e^{a_i b_j}] / (Δ(A) Δ(B))
//! ```
//!
//! and the Segal–Bargmann spaces of conjugation-invariant functions on n×n
//! matrices and alternating functions on ℂⁿ.
//!
//! The crate is `no_std` (it needs `alloc`). The exact half works with
//! Gaussian-rational polynomials: [`poly`], [`symmetric`], [`invariant`].
//! The numerical half in [`numeric`] evaluates the integral by the
//! determinant formula, by Monte Carlo over Haar-random unitaries and by the
//! truncated character expansion.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod invariant;
pub mod numeric;
pub mod partition;
pub mod poly;
pub mod scalar;
pub mod scaled;
pub mod symmetric;

/// Version of this crate, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use invariant::{AltPoly, EntryPoly, ExactCheck, SymPoly, TraceExpander, TracePoly};
pub use partition::Partition;
pub use poly::{ExactPoly, MultiIndex};
pub use scalar::{GaussianRational, Radical};
pub use scaled::Scaled;
pub use symmetric::PowerSumPoly;
