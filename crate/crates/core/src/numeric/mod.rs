//! Numerical evaluators, samplers and Monte Carlo machinery.

pub mod hciz;
pub mod linalg;
pub mod sampling;

pub use hciz::{
    alt_kernel, alt_kernel_series, coherent_reproducing_check, ginibre_moment_suite, hciz_determinant,
    hciz_determinant_with_tol, hciz_mc, kernel_q_mc, kernel_series, kernel_series_adaptive, psi_coherent_sides,
    GinibreMoments, SeriesResult, Spectrum, DEFAULT_DEGENERACY_TOL,
};
pub use linalg::ComplexMatrix;
pub use sampling::{sample_ginibre, sample_haar_unitary, sample_separated_reals, MCEstimate, McPlan, McRng, RNG_DESCRIPTION};
