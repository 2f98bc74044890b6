//! Random matrix samplers and the Monte Carlo reduction.
//!
//! Every estimate is driven by a [`McPlan`]: the sample count is split into
//! `workers` substreams, substream `w` draws from a ChaCha8 generator seeded
//! with `seed` on stream `w`, and the per-substream accumulators are merged in
//! worker order. The result therefore depends on `(seed, workers)` only, not
//! on how the substreams are scheduled.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::linalg::{householder_qr, ComplexMatrix};

pub type McRng = ChaCha8Rng;

/// Recorded in reports so that runs can be reproduced.
pub const RNG_DESCRIPTION: &str = "ChaCha8Rng (rand_chacha 0.9): seed_from_u64(seed), stream = worker index";

/// One standard complex Gaussian, density π⁻¹e^{−|z|²}.
pub fn complex_gaussian(rng: &mut McRng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// n×n matrix with i.i.d. standard complex Gaussian entries.
pub fn sample_ginibre(n: usize, rng: &mut McRng) -> ComplexMatrix {
    let data = (0..n * n).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::from_row_major(n, data).expect("gaussian samples are finite")
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
pub fn sample_haar_unitary(n: usize, rng: &mut McRng) -> ComplexMatrix {
    loop {
        let z = sample_ginibre(n, rng);
        let (mut q, r_diag) = householder_qr(&z);
        if r_diag.iter().any(|d| d.norm() == 0.0) {
            continue;
        }
        for (j, d) in r_diag.iter().enumerate() {
            let phase = d / d.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
        return q;
    }
}

/// `n` sorted reals in `[lo, hi]` with consecutive gaps ≥ `gap`, uniform over
/// all such configurations: sorted uniforms on the shortened interval, with
/// the i-th point shifted by i·gap.
pub fn sample_separated_reals(rng: &mut McRng, n: usize, lo: f64, hi: f64, gap: f64) -> Option<Vec<f64>> {
    let slack = hi - lo - gap * n.saturating_sub(1) as f64;
    if n == 0 || slack < 0.0 {
        return None;
    }
    let mut u: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=slack)).collect();
    u.sort_by(f64::total_cmp);
    Some(u.iter().enumerate().map(|(i, x)| lo + x + gap * i as f64).collect())
}

/// Running mean and componentwise sum of squared deviations (Welford).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McAccumulator {
    count: u64,
    mean: Complex64,
    m2_re: f64,
    m2_im: f64,
}

impl Default for McAccumulator {
    fn default() -> Self {
        McAccumulator { count: 0, mean: Complex64::new(0.0, 0.0), m2_re: 0.0, m2_im: 0.0 }
    }
}

impl McAccumulator {
    pub fn push(&mut self, x: Complex64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2_re += d.re * (x.re - self.mean.re);
        self.m2_im += d.im * (x.im - self.mean.im);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&self, other: &McAccumulator) -> McAccumulator {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        let d = other.mean - self.mean;
        McAccumulator {
            count: self.count + other.count,
            mean: self.mean + d * (nb / n),
            m2_re: self.m2_re + other.m2_re + d.re * d.re * na * nb / n,
            m2_im: self.m2_im + other.m2_im + d.im * d.im * na * nb / n,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(&self, seed: u64, workers: u32) -> MCEstimate {
        let n = self.count as f64;
        let se = |m2: f64| if self.count < 2 { 0.0 } else { libm::sqrt(m2 / (n - 1.0) / n) };
        let (stderr_re, stderr_im) = (se(self.m2_re), se(self.m2_im));
        MCEstimate {
            mean: self.mean,
            stderr: libm::hypot(stderr_re, stderr_im),
            stderr_re,
            stderr_im,
            n_samples: self.count,
            seed,
            workers,
        }
    }
}

/// A Monte Carlo mean with its standard error.
///
/// `stderr` is the standard error of the complex mean, the quadrature sum of
/// the real and imaginary components' standard errors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MCEstimate {
    pub mean: Complex64,
    pub stderr: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub workers: u32,
}

impl MCEstimate {
    /// |mean − target| ≤ k·stderr
    pub fn agrees_with(&self, target: Complex64, k_sigma: f64) -> bool {
        (self.mean - target).norm() <= k_sigma * self.stderr
    }
}

/// How a Monte Carlo run is split into reproducible substreams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McPlan {
    pub seed: u64,
    pub n_samples: u64,
    pub workers: u32,
}

impl McPlan {
    pub fn new(seed: u64, n_samples: u64) -> Self {
        McPlan { seed, n_samples, workers: 1 }
    }

    pub fn with_workers(mut self, workers: u32) -> Self {
        self.workers = workers.max(1);
        self
    }

    /// Generator and sample count of substream `w`.
    pub fn substream(&self, w: u32) -> (McRng, u64) {
        let workers = self.workers.max(1) as u64;
        let base = self.n_samples / workers;
        let extra = u64::from((w as u64) < self.n_samples % workers);
        let mut rng = McRng::seed_from_u64(self.seed);
        rng.set_stream(w as u64);
        (rng, base + extra)
    }

    /// Runs substream `w`, accumulating `K` statistics per draw.
    pub fn run_worker<const K: usize, F>(&self, w: u32, mut draw: F) -> [McAccumulator; K]
    where
        F: FnMut(&mut McRng) -> [Complex64; K],
    {
        let (mut rng, count) = self.substream(w);
        let mut acc = [McAccumulator::default(); K];
        for _ in 0..count {
            let xs = draw(&mut rng);
            for (a, x) in acc.iter_mut().zip(xs) {
                a.push(x);
            }
        }
        acc
    }

    /// Merges per-worker accumulators in worker order.
    pub fn combine<const K: usize>(&self, parts: &[[McAccumulator; K]]) -> [MCEstimate; K] {
        let mut total = [McAccumulator::default(); K];
        for part in parts {
            for (t, p) in total.iter_mut().zip(part) {
                *t = t.merge(p);
            }
        }
        total.map(|t| t.finish(self.seed, self.workers))
    }

    /// Runs every substream sequentially.
    pub fn estimate_many<const K: usize, F>(&self, mut draw: F) -> [MCEstimate; K]
    where
        F: FnMut(&mut McRng) -> [Complex64; K],
    {
        let parts: Vec<[McAccumulator; K]> = (0..self.workers.max(1)).map(|w| self.run_worker(w, &mut draw)).collect();
        self.combine(&parts)
    }

    pub fn estimate<F>(&self, mut draw: F) -> MCEstimate
    where
        F: FnMut(&mut McRng) -> Complex64,
    {
        let [e] = self.estimate_many(|rng| [draw(rng)]);
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<Complex64> = (0..101).map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64).sqrt())).collect();
        let mut whole = McAccumulator::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (McAccumulator::default(), McAccumulator::default());
        xs[..40].iter().for_each(|&x| a.push(x));
        xs[40..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(&b);
        assert_eq!(merged.count(), 101);
        assert!((merged.mean - whole.mean).norm() < 1e-14);
        assert!((merged.m2_re - whole.m2_re).abs() < 1e-10);
        assert!((merged.m2_im - whole.m2_im).abs() < 1e-10);
    }

    #[test]
    fn constant_draws_have_zero_error() {
        let e = McPlan::new(3, 1000).with_workers(4).estimate(|_| Complex64::new(2.5, -1.0));
        assert_eq!(e.mean, Complex64::new(2.5, -1.0));
        assert_eq!(e.stderr, 0.0);
        assert_eq!(e.n_samples, 1000);
    }

    #[test]
    fn substreams_partition_the_sample_count() {
        let plan = McPlan::new(9, 10).with_workers(3);
        let counts: Vec<u64> = (0..3).map(|w| plan.substream(w).1).collect();
        assert_eq!(counts, [4, 3, 3]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let plan = McPlan::new(42, 500).with_workers(2);
        let a = plan.estimate(complex_gaussian);
        let b = plan.estimate(complex_gaussian);
        assert_eq!(a, b);
        let c = McPlan::new(43, 500).with_workers(2).estimate(complex_gaussian);
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = McRng::seed_from_u64(1);
        for n in 1..=6 {
            for _ in 0..200 {
                let u = sample_haar_unitary(n, &mut rng);
                assert!(u.unitarity_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn ginibre_first_moments() {
        let plan = McPlan::new(5, 100_000);
        let [m1, m2] = plan.estimate_many(|rng| {
            let z = complex_gaussian(rng);
            [z, Complex64::new(z.norm_sqr(), 0.0)]
        });
        assert!(m1.agrees_with(Complex64::new(0.0, 0.0), 4.0), "{m1:?}");
        assert!(m2.agrees_with(Complex64::new(1.0, 0.0), 4.0), "{m2:?}");
    }

    #[test]
    fn separated_reals_respect_the_gap() {
        let mut rng = McRng::seed_from_u64(2);
        for n in 1..=8 {
            for _ in 0..100 {
                let xs = sample_separated_reals(&mut rng, n, -1.0, 1.0, 0.1).unwrap();
                assert_eq!(xs.len(), n);
                assert!(xs.windows(2).all(|w| w[1] - w[0] >= 0.1 - 1e-15));
                assert!(xs.iter().all(|x| (-1.0..=1.0 + 1e-12).contains(x)));
            }
        }
        assert!(sample_separated_reals(&mut rng, 30, -1.0, 1.0, 0.1).is_none());
    }
}