//! Floating-point evaluators of the HCIZ integral and of the two reproducing kernels.
//!
//! Two argument conventions coexist. The `hciz_*` functions integrate
//! `exp Tr(u A u⁻¹ B)` and are holomorphic in both spectra. The `kernel_*`
//! functions integrate `exp Tr(u⁻¹ x u y*)` and are conjugate-linear in the
//! second argument, so `kernel(x, y) == hciz(x, conj(y))`.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::linalg::{det_in_place, det_with_inverse_sum, ComplexMatrix};
use super::sampling::{sample_ginibre, sample_haar_unitary, MCEstimate, McPlan, McRng};
use crate::error::{Error, Result};
use crate::invariant::AltPoly;
use crate::partition::{enumerate_partitions, partitions_of, Partition};
use crate::poly::ExactPoly;
use crate::scalar::{factorial, GaussianRational};
use crate::symmetric::{
    alternant, hciz_prefactor, norm_const_c_squared, permutations, shifted, staircase, vector_factorial, SchurEvaluator,
};

/// Spectral gaps below this are treated as coincident eigenvalues.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigenvalues of a diagonal matrix, with the minimum pairwise gap cached.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    eigs: Vec<Complex64>,
    gap: f64,
}

impl Spectrum {
    pub fn new(eigs: Vec<Complex64>) -> Result<Self> {
        if eigs.is_empty() {
            return Err(Error::InvalidArgument("spectrum must be nonempty"));
        }
        if eigs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("spectrum entries must be finite"));
        }
        let mut gap = f64::INFINITY;
        for i in 0..eigs.len() {
            for j in i + 1..eigs.len() {
                gap = gap.min((eigs[i] - eigs[j]).norm());
            }
        }
        Ok(Spectrum { eigs, gap })
    }

    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn eigs(&self) -> &[Complex64] {
        &self.eigs
    }

    pub fn len(&self) -> usize {
        self.eigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigs.is_empty()
    }

    /// min_{i<j} |λ_i − λ_j|; infinite for a single eigenvalue.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn conj(&self) -> Spectrum {
        Spectrum { eigs: self.eigs.iter().map(|z| z.conj()).collect(), gap: self.gap }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diagonal(&self.eigs)
    }

    /// ∏_{i<j} (λ_j − λ_i)
    pub fn vandermonde(&self) -> Complex64 {
        vandermonde_of(&self.eigs)
    }
}

/// Both spectra must have the same length.
pub fn check_same_len(a: &Spectrum, b: &Spectrum) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a.len(), found: b.len() })
    }
}

fn prefactor(n: usize) -> f64 {
    hciz_prefactor(n).to_f64().unwrap_or(f64::INFINITY)
}

/// ∏_{p=1}^{n−1} p! · det[e^{a_i b_j}] / (Δ(a)Δ(b)).
pub fn hciz_determinant(a: &Spectrum, b: &Spectrum) -> Result<Complex64> {
    hciz_determinant_with_tol(a, b, DEFAULT_DEGENERACY_TOL)
}

pub fn hciz_determinant_with_tol(a: &Spectrum, b: &Spectrum, tolerance: f64) -> Result<Complex64> {
    check_same_len(a, b)?;
    for s in [a, b] {
        if s.gap() < tolerance {
            return Err(Error::DegenerateSpectrum { gap: s.gap(), tolerance });
        }
    }
    let n = a.len();
    let (a, b) = (a.eigs(), b.eigs());
    if n == 1 {
        return Ok((a[0] * b[0]).exp());
    }
    // Both routes are exact in exact arithmetic; each carries a first-order
    // error estimate (entry error × Σ|X⁻¹|), and the smaller one wins.
    let (dd, dd_scale) = divided_differences(a, b);
    let (dd_det, dd_inv) = det_with_inverse_sum(&dd, n);
    let direct: Vec<Complex64> = a.iter().flat_map(|ai| b.iter().map(move |bj| (ai * bj).exp())).collect();
    let (direct_det, direct_inv) = det_with_inverse_sum(&direct, n);
    let direct_scale = direct.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let vandermondes = vandermonde_of(a) * vandermonde_of(b);
    let ratio = if dd_scale * dd_inv <= direct_scale * direct_inv { dd_det } else { direct_det / vandermondes };
    Ok(ratio * prefactor(n))
}

fn vandermonde_of(xs: &[Complex64]) -> Complex64 {
    let mut acc = ONE;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            acc *= xs[j] - xs[i];
        }
    }
    acc
}

/// The matrix M_ik = e^{xy}[a_1..a_i; b_1..b_k] of two-variable divided
/// differences, row-major.
///
/// det M = det[e^{a_i b_j}] / (Δ(a)Δ(b)), and M stays well scaled as nodes
/// approach each other, so no cancellation against the Vandermondes occurs.
/// M is the first column of exp(J_a ⊗ J_b), where J_a is lower bidiagonal
/// with a on the diagonal and ones below it; the exponential is applied to
/// e_(1,1) by a scaled Taylor series. Also returns the largest magnitude met
/// along the way, which bounds the absolute rounding error of the entries.
fn divided_differences(a: &[Complex64], b: &[Complex64]) -> (Vec<Complex64>, f64) {
    let n = a.len();
    let apply = |v: &[Complex64], out: &mut [Complex64]| {
        for i in 0..n {
            for k in 0..n {
                let mut acc = a[i] * b[k] * v[i * n + k];
                if k > 0 {
                    acc += a[i] * v[i * n + k - 1];
                }
                if i > 0 {
                    acc += b[k] * v[(i - 1) * n + k];
                    if k > 0 {
                        acc += v[(i - 1) * n + k - 1];
                    }
                }
                out[i * n + k] = acc;
            }
        }
    };
    let max_abs = |xs: &[Complex64]| xs.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let bound = (max_abs(a) + 1.0) * (max_abs(b) + 1.0);
    let steps = libm::ceil(bound / 0.5).max(1.0) as usize;
    let h = 1.0 / steps as f64;

    let mut v = alloc::vec![Complex64::zero(); n * n];
    v[0] = ONE;
    let mut term = v.clone();
    let mut next = v.clone();
    let mut peak = 1.0f64;
    for _ in 0..steps {
        term.copy_from_slice(&v);
        let mut sum = v.clone();
        for m in 1..64 {
            apply(&term, &mut next);
            let scale = h / m as f64;
            for (t, x) in term.iter_mut().zip(&next) {
                *t = x * scale;
            }
            for (s, t) in sum.iter_mut().zip(&term) {
                *s += t;
            }
            peak = peak.max(max_abs(&term));
            if max_abs(&term) <= 1e-18 * max_abs(&sum) {
                break;
            }
        }
        peak = peak.max(max_abs(&sum));
        v = sum;
    }
    (v, peak)
}

/// exp Tr(u A u⁻¹ B) = exp Σ_ij |u_ij|² a_j b_i for diagonal A, B.
pub fn hciz_integrand(a: &Spectrum, b: &Spectrum, u: &ComplexMatrix) -> Complex64 {
    let n = a.len();
    if n == 1 {
        // 1×1 conjugation is the identity
        return (a.eigs[0] * b.eigs[0]).exp();
    }
    let mut s = Complex64::zero();
    for i in 0..n {
        for j in 0..n {
            s += a.eigs[j] * b.eigs[i] * u[(i, j)].norm_sqr();
        }
    }
    s.exp()
}

/// One Monte Carlo draw of the HCIZ integrand.
pub fn hciz_draw(a: &Spectrum, b: &Spectrum, rng: &mut McRng) -> Complex64 {
    let u = sample_haar_unitary(a.len(), rng);
    hciz_integrand(a, b, &u)
}

/// A standard error needs at least two samples.
pub fn check_mc_args(n_samples: u64) -> Result<()> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("at least two samples are needed for a standard error"));
    }
    Ok(())
}

/// Monte Carlo mean of exp Tr(u A u⁻¹ B) over Haar-random u, single substream.
pub fn hciz_mc(a: &Spectrum, b: &Spectrum, n_samples: u64, seed: u64) -> Result<MCEstimate> {
    hciz_mc_with(a, b, &McPlan::new(seed, n_samples))
}

pub fn hciz_mc_with(a: &Spectrum, b: &Spectrum, plan: &McPlan) -> Result<MCEstimate> {
    check_same_len(a, b)?;
    check_mc_args(plan.n_samples)?;
    Ok(plan.estimate(|rng| hciz_draw(a, b, rng)))
}

/// Result of a truncated character expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub max_weight_used: u32,
    /// Σ |terms| over the final weight included.
    pub last_shell_magnitude: f64,
}

/// δ!/(λ+δ)! as a double.
fn series_coefficient(lambda: &Partition, n: usize) -> f64 {
    let mut c = 1.0;
    for (&part, d) in lambda.parts().iter().zip(staircase(n)) {
        for k in d + 1..=d + part {
            c /= k as f64;
        }
    }
    c
}

struct ShellSum {
    x: SchurEvaluator,
    y: SchurEvaluator,
    n: usize,
}

impl ShellSum {
    fn new(x: &Spectrum, y: &Spectrum, cap: u32) -> Self {
        ShellSum {
            x: SchurEvaluator::new(x.eigs(), cap as usize),
            y: SchurEvaluator::new(y.eigs(), cap as usize),
            n: x.len(),
        }
    }

    /// (Σ terms, Σ |terms|) over partitions of weight exactly `w`.
    fn shell(&self, w: u32) -> (Complex64, f64) {
        let mut sum = Complex64::zero();
        let mut mag = 0.0;
        for lambda in partitions_of(w, self.n) {
            let t = self.x.eval(&lambda) * self.y.eval(&lambda).conj() * series_coefficient(&lambda, self.n);
            sum += t;
            mag += t.norm();
        }
        (sum, mag)
    }
}

/// Σ_{|λ| ≤ max_weight} δ!/(λ+δ)! · s_λ(x) · conj(s_λ(y)), the invariant
/// kernel Q(x, y) truncated by weight.
pub fn kernel_series(x: &Spectrum, y: &Spectrum, max_weight: u32) -> Result<SeriesResult> {
    check_same_len(x, y)?;
    let terms = ShellSum::new(x, y, max_weight);
    let mut value = Complex64::zero();
    let mut last = 0.0;
    for w in 0..=max_weight {
        let (s, mag) = terms.shell(w);
        value += s;
        last = mag;
    }
    Ok(SeriesResult { value, max_weight_used: max_weight, last_shell_magnitude: last })
}

/// Adds weights until two consecutive shells fall below `1e-3 · tolerance`,
/// or until `max_weight` is reached.
pub fn kernel_series_adaptive(x: &Spectrum, y: &Spectrum, tolerance: f64, max_weight: u32) -> Result<SeriesResult> {
    check_same_len(x, y)?;
    let threshold = 1e-3 * tolerance;
    let terms = ShellSum::new(x, y, max_weight);
    let mut value = Complex64::zero();
    let mut small_run = 0;
    let mut last = 0.0;
    let mut used = 0;
    for w in 0..=max_weight {
        let (s, mag) = terms.shell(w);
        value += s;
        last = mag;
        used = w;
        small_run = if mag < threshold { small_run + 1 } else { 0 };
        if w > 0 && small_run >= 2 {
            break;
        }
    }
    Ok(SeriesResult { value, max_weight_used: used, last_shell_magnitude: last })
}

/// exp Tr(u⁻¹ x u y†)
pub fn kernel_q_integrand(x: &ComplexMatrix, y: &ComplexMatrix, u: &ComplexMatrix) -> Complex64 {
    let conjugated = u.adjoint().mul(x).mul(u);
    conjugated.trace_mul_adjoint(y).exp()
}

pub fn kernel_q_draw(x: &ComplexMatrix, y: &ComplexMatrix, rng: &mut McRng) -> Complex64 {
    let u = sample_haar_unitary(x.dim(), rng);
    kernel_q_integrand(x, y, &u)
}

/// Monte Carlo estimate of Q(x, y) = ∫_U exp Tr(u⁻¹ x u y*) du.
pub fn kernel_q_mc(x: &ComplexMatrix, y: &ComplexMatrix, n_samples: u64, seed: u64) -> Result<MCEstimate> {
    kernel_q_mc_with(x, y, &McPlan::new(seed, n_samples))
}

pub fn kernel_q_mc_with(x: &ComplexMatrix, y: &ComplexMatrix, plan: &McPlan) -> Result<MCEstimate> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    check_mc_args(plan.n_samples)?;
    Ok(plan.estimate(|rng| kernel_q_draw(x, y, rng)))
}

/// Monte Carlo estimates of E|Tr z|² and E|det z|² over the Ginibre ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GinibreMoments {
    pub n: usize,
    pub trace_sq: MCEstimate,
    pub det_sq: MCEstimate,
    /// n
    pub expected_trace_sq: f64,
    /// n!
    pub expected_det_sq: f64,
}

impl GinibreMoments {
    pub fn within(&self, k_sigma: f64) -> (bool, bool) {
        (
            self.trace_sq.agrees_with(Complex64::new(self.expected_trace_sq, 0.0), k_sigma),
            self.det_sq.agrees_with(Complex64::new(self.expected_det_sq, 0.0), k_sigma),
        )
    }
}

pub const GINIBRE_MAX_N: usize = 6;

/// One Ginibre draw reduced to `[|Tr z|², |det z|²]`.
pub fn ginibre_draw(n: usize, rng: &mut McRng) -> [Complex64; 2] {
    let z = sample_ginibre(n, rng);
    [Complex64::new(z.trace().norm_sqr(), 0.0), Complex64::new(z.det().norm_sqr(), 0.0)]
}

pub fn ginibre_moment_suite(n: usize, n_samples: u64, seed: u64) -> Result<GinibreMoments> {
    ginibre_moment_suite_with(n, &McPlan::new(seed, n_samples))
}

pub fn ginibre_moment_suite_with(n: usize, plan: &McPlan) -> Result<GinibreMoments> {
    check_ginibre_args(n, plan.n_samples)?;
    let [trace_sq, det_sq] = plan.estimate_many(|rng| ginibre_draw(n, rng));
    Ok(ginibre_moments_from(n, trace_sq, det_sq))
}

pub fn check_ginibre_args(n: usize, n_samples: u64) -> Result<()> {
    if n == 0 || n > GINIBRE_MAX_N {
        return Err(Error::InvalidArgument("Ginibre moment suite supports 1 <= n <= 6"));
    }
    check_mc_args(n_samples)
}

pub fn ginibre_moments_from(n: usize, trace_sq: MCEstimate, det_sq: MCEstimate) -> GinibreMoments {
    GinibreMoments {
        n,
        trace_sq,
        det_sq,
        expected_trace_sq: n as f64,
        expected_det_sq: factorial(n as u32).to_f64().unwrap_or(f64::INFINITY),
    }
}

/// R(z, a) = (1/n!) Σ_σ sgn(σ) exp(σ(z)·ā).
pub fn alt_kernel(z: &[Complex64], a: &[Complex64]) -> Result<Complex64> {
    if z.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: z.len(), found: a.len() });
    }
    let n = z.len();
    let mut acc = Complex64::zero();
    for (sigma, sign) in permutations(n) {
        let dot: Complex64 = (0..n).map(|i| z[sigma[i]] * a[i].conj()).sum();
        acc += dot.exp() * sign as f64;
    }
    Ok(acc / factorial(n as u32).to_f64().unwrap_or(f64::INFINITY))
}

/// a_μ(z) = det[z_i^{μ_j}] evaluated numerically.
pub fn alternant_numeric(mu: &[u32], z: &[Complex64]) -> Complex64 {
    let n = mu.len();
    let mut m = Vec::with_capacity(n * n);
    for zi in z {
        for &mj in mu {
            m.push(zi.powu(mj));
        }
    }
    det_in_place(&mut m, n)
}

/// Σ_{|λ| ≤ max_weight} d_λ(z) conj(d_λ(a)), the alternating kernel in the d_λ basis.
pub fn alt_kernel_series(z: &[Complex64], a: &[Complex64], max_weight: u32) -> Result<Complex64> {
    if z.len() != a.len() {
        return Err(Error::DimensionMismatch { expected: z.len(), found: a.len() });
    }
    let n = z.len();
    let nf = factorial(n as u32).to_f64().unwrap_or(f64::INFINITY);
    let mut acc = Complex64::zero();
    for lambda in enumerate_partitions(max_weight, n) {
        let mu = shifted(&lambda, n)?;
        let norm = nf * vector_factorial(&mu).to_f64().unwrap_or(f64::INFINITY);
        acc += alternant_numeric(&mu, z) * alternant_numeric(&mu, a).conj() / norm;
    }
    Ok(acc)
}

/// Both sides of ⟨Q_x, Q_y⟩ = ⟨R_x / (cΔ(x̄)), R_y / (cΔ(ȳ))⟩: the invariant
/// kernel from the character series, and R(x, y) / (c² Δ(x) Δ(ȳ)).
pub fn psi_coherent_sides(x: &Spectrum, y: &Spectrum, max_weight: u32) -> Result<(Complex64, Complex64)> {
    check_same_len(x, y)?;
    let lhs = kernel_series(x, y, max_weight)?.value;
    let c2 = norm_const_c_squared(x.len()).to_f64().unwrap_or(0.0);
    let rhs = alt_kernel(x.eigs(), y.eigs())? / (x.vandermonde() * y.conj().vandermonde() * c2);
    Ok((lhs, rhs))
}

/// |⟨R_a, F⟩ − F(a)| with R_a truncated at `max_weight` in the d_λ basis.
///
/// Each pairing ⟨d_λ, F⟩ is computed exactly; the radicals in d_λ(a) and
/// ⟨d_λ, F⟩ combine into the rational 1/(n!(λ+δ)!) before conversion to floating point.
pub fn coherent_reproducing_check(a: &Spectrum, f: &AltPoly, max_weight: u32) -> Result<f64> {
    let n = a.len();
    let poly: &ExactPoly = f.poly();
    if poly.n_vars() != n {
        return Err(Error::DimensionMismatch { expected: n, found: poly.n_vars() });
    }
    let mut value = Complex64::zero();
    for lambda in enumerate_partitions(max_weight, n) {
        let mu = shifted(&lambda, n)?;
        let alt = alternant(&mu)?;
        let pairing = alt.bargmann_inner(poly)?;
        if pairing.is_zero() {
            continue;
        }
        let norm = GaussianRational::from_biguint(&(factorial(n as u32) * vector_factorial(&mu)));
        let coeff = pairing.checked_div(&norm).expect("norm is positive");
        value += coeff.to_complex64() * alt.eval_complex(a.eigs())?;
    }
    Ok((value - poly.eval_complex(a.eigs())?).norm())
}
