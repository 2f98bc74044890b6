//! Parallel Monte Carlo over the substreams of a [`McPlan`].
//!
//! Each worker index maps to one substream and the accumulators are merged in
//! worker order, so results match the sequential core routines bit for bit.

use hciz_core::numeric::hciz::{
    check_ginibre_args, check_mc_args, check_same_len, ginibre_draw, ginibre_moments_from, hciz_draw, kernel_q_draw,
    GinibreMoments,
};
use hciz_core::numeric::sampling::McAccumulator;
use hciz_core::numeric::{ComplexMatrix, MCEstimate, McPlan, McRng, Spectrum};
use hciz_core::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

/// Worker count used when none is given; fixed so results do not depend on the machine.
pub const DEFAULT_WORKERS: u32 = 8;

pub fn estimate_many<const K: usize, F>(plan: &McPlan, draw: F) -> [MCEstimate; K]
where
    F: Fn(&mut McRng) -> [Complex64; K] + Sync,
{
    let parts: Vec<[McAccumulator; K]> =
        (0..plan.workers.max(1)).into_par_iter().map(|w| plan.run_worker(w, &draw)).collect();
    plan.combine(&parts)
}

pub fn estimate<F>(plan: &McPlan, draw: F) -> MCEstimate
where
    F: Fn(&mut McRng) -> Complex64 + Sync,
{
    let [e] = estimate_many(plan, |rng| [draw(rng)]);
    e
}

pub fn hciz_mc(a: &Spectrum, b: &Spectrum, plan: &McPlan) -> Result<MCEstimate> {
    check_same_len(a, b)?;
    check_mc_args(plan.n_samples)?;
    Ok(estimate(plan, |rng| hciz_draw(a, b, rng)))
}

pub fn kernel_q_mc(x: &ComplexMatrix, y: &ComplexMatrix, plan: &McPlan) -> Result<MCEstimate> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    check_mc_args(plan.n_samples)?;
    Ok(estimate(plan, |rng| kernel_q_draw(x, y, rng)))
}

pub fn ginibre_moments(n: usize, plan: &McPlan) -> Result<GinibreMoments> {
    check_ginibre_args(n, plan.n_samples)?;
    let [trace_sq, det_sq] = estimate_many(plan, |rng| ginibre_draw(n, rng));
    Ok(ginibre_moments_from(n, trace_sq, det_sq))
}

/// A pool capped at `threads`, or rayon's default when `None`.
pub fn thread_pool(threads: Option<usize>) -> std::result::Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hciz_core::numeric::hciz::{ginibre_moment_suite_with, hciz_mc_with};

    #[test]
    fn parallel_matches_sequential() {
        let a = Spectrum::from_reals(&[0.0, 0.4, 1.1]).unwrap();
        let b = Spectrum::from_reals(&[-0.5, 0.2, 0.9]).unwrap();
        let plan = McPlan::new(11, 3001).with_workers(5);
        assert_eq!(hciz_mc(&a, &b, &plan).unwrap(), hciz_mc_with(&a, &b, &plan).unwrap());
        assert_eq!(ginibre_moments(2, &plan).unwrap(), ginibre_moment_suite_with(2, &plan).unwrap());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let a = Spectrum::from_reals(&[0.0, 1.0]).unwrap();
        let plan = McPlan::new(3, 2000).with_workers(DEFAULT_WORKERS);
        let one = thread_pool(Some(1)).unwrap().install(|| hciz_mc(&a, &a, &plan).unwrap());
        let four = thread_pool(Some(4)).unwrap().install(|| hciz_mc(&a, &a, &plan).unwrap());
        assert_eq!(one, four);
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = Spectrum::from_reals(&[0.0, 1.0]).unwrap();
        let b = Spectrum::from_reals(&[0.0]).unwrap();
        assert!(hciz_mc(&a, &b, &McPlan::new(0, 10)).is_err());
        assert!(hciz_mc(&a, &a, &McPlan::new(0, 1)).is_err());
        assert!(ginibre_moments(7, &McPlan::new(0, 10)).is_err());
    }
}
