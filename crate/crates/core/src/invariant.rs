//! Conjugation-invariant polynomials on n×n matrices, written in the trace
//! generators t_k = Tr(z^k), and the restriction map ψ(F) = c·a_δ·F|_D onto
//! alternating polynomials in the eigenvalues.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, Partition};
use crate::poly::{ExactPoly, MultiIndex};
use crate::scalar::{GaussianRational, Radical};
use crate::scaled::Scaled;
use crate::symmetric::{
    alternant, is_alternating, is_symmetric, norm_const_c, norm_const_c_squared, power_sum, schur_to_power_sums_with,
    shifted, staircase, superfactorial, vector_factorial, weighted_degree, write_generator_poly, CharacterTable,
    PowerSumPoly,
};

/// A polynomial in the trace generators; variable `k−1` stands for t_k.
#[derive(Clone, Debug)]
pub struct TracePoly(ExactPoly);

impl TracePoly {
    /// Wraps a polynomial whose variable `k−1` is read as t_k.
    pub fn new(poly: ExactPoly) -> Self {
        if poly.n_vars() == 0 {
            return TracePoly(ExactPoly::constant(1, poly.eval_at_zero()));
        }
        TracePoly(poly)
    }

    pub fn zero() -> Self {
        TracePoly(ExactPoly::zero(1))
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        TracePoly(ExactPoly::constant(1, c))
    }

    /// t_k = Tr(z^k), for k ≥ 1.
    pub fn t(k: usize) -> Self {
        assert!(k >= 1, "trace generators start at t1");
        TracePoly(ExactPoly::var(k, k - 1).expect("generator in range"))
    }

    /// t_ρ = ∏ t_{ρ_i}.
    pub fn monomial(rho: &Partition) -> Self {
        let n_gens = rho.parts().first().map_or(1, |&p| p as usize);
        let index = MultiIndex::from_pairs(rho.parts().iter().map(|&k| (k as usize - 1, 1)));
        TracePoly(ExactPoly::monomial(n_gens, index, GaussianRational::one()).expect("generators in range"))
    }

    pub fn poly(&self) -> &ExactPoly {
        &self.0
    }

    pub fn n_generators(&self) -> usize {
        self.0.n_vars()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Degree with deg(t_k) = k; `None` for zero.
    pub fn weighted_degree(&self) -> Option<u32> {
        weighted_degree(&self.0)
    }

    fn aligned(&self, other: &TracePoly) -> (ExactPoly, ExactPoly) {
        let m = self.0.n_vars().max(other.0.n_vars());
        (self.0.widen(m).expect("widening"), other.0.widen(m).expect("widening"))
    }

    pub fn scale(&self, k: &GaussianRational) -> TracePoly {
        TracePoly(self.0.scale(k))
    }

    pub fn from_power_sums(ps: &PowerSumPoly) -> Self {
        Self::new(ps.poly().clone())
    }

    pub fn to_power_sums(&self) -> PowerSumPoly {
        PowerSumPoly::new(self.0.clone())
    }
}

impl PartialEq for TracePoly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a == b
    }
}

impl<'a> Add<&'a TracePoly> for &'a TracePoly {
    type Output = TracePoly;
    fn add(self, rhs: &TracePoly) -> TracePoly {
        let (a, b) = self.aligned(rhs);
        TracePoly(&a + &b)
    }
}

impl<'a> Sub<&'a TracePoly> for &'a TracePoly {
    type Output = TracePoly;
    fn sub(self, rhs: &TracePoly) -> TracePoly {
        let (a, b) = self.aligned(rhs);
        TracePoly(&a - &b)
    }
}

impl<'a> Mul<&'a TracePoly> for &'a TracePoly {
    type Output = TracePoly;
    fn mul(self, rhs: &TracePoly) -> TracePoly {
        let (a, b) = self.aligned(rhs);
        TracePoly(&a * &b)
    }
}

/// Terms like `(3/2, 0) t1^2 t3`, joined by ` + `.
impl fmt::Display for TracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_generator_poly(f, &self.0, 't')
    }
}

/// Trace monomials t_ρ for every ρ with |ρ| ≤ `max_weight`.
pub fn trace_monomials(max_weight: u32) -> Vec<TracePoly> {
    enumerate_partitions(max_weight, max_weight as usize).iter().map(TracePoly::monomial).collect()
}

/// Random trace polynomial with `n_terms` monomials t_ρ, where |ρ| ≤ `max_weight`
/// and every part is at most `max_generator`, and small Gaussian-rational coefficients.
pub fn random_trace_poly<R: Rng + ?Sized>(rng: &mut R, max_weight: u32, max_generator: u32, n_terms: usize) -> TracePoly {
    let pool: Vec<Partition> = enumerate_partitions(max_weight, max_weight as usize)
        .into_iter()
        .filter(|rho| rho.parts().first().is_none_or(|&p| p <= max_generator))
        .collect();
    let coeff = |rng: &mut R| {
        let den = rng.random_range(1..=4);
        BigRational::new(BigInt::from(rng.random_range(-3..=3)), BigInt::from(den))
    };
    let mut acc = TracePoly::zero();
    for _ in 0..n_terms {
        let rho = &pool[rng.random_range(0..pool.len())];
        let c = GaussianRational::new(coeff(rng), coeff(rng));
        acc = &acc + &TracePoly::monomial(rho).scale(&c);
    }
    acc
}

/// A polynomial in the n² matrix entries; entry (i, j) is variable `i·n + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryPoly {
    n: usize,
    poly: ExactPoly,
}

impl EntryPoly {
    pub fn new(n: usize, poly: ExactPoly) -> Result<Self> {
        if poly.n_vars() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: poly.n_vars() });
        }
        Ok(EntryPoly { n, poly })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &ExactPoly {
        &self.poly
    }

    pub fn entry_var(n: usize, i: usize, j: usize) -> usize {
        i * n + j
    }

    /// Sets off-diagonal entries to zero and renames z_ii ↦ x_i.
    pub fn restrict_to_diagonal(&self) -> ExactPoly {
        let n = self.n;
        let terms = self
            .poly
            .terms()
            .filter(|(m, _)| m.iter().all(|(v, _)| v / n == v % n))
            .map(|(m, c)| (MultiIndex::from_pairs(m.iter().map(|(v, e)| (v / n, e))), c.clone()));
        ExactPoly::from_terms(n, terms).expect("diagonal variables in range")
    }

    /// Applies z ↦ P z Pᵀ for the permutation matrix of `perm`, i.e. z_ij ↦ z_{π(i)π(j)}.
    pub fn conjugate_by_permutation(&self, perm: &[usize]) -> EntryPoly {
        let n = self.n;
        let map: Vec<usize> = (0..n * n).map(|v| perm[v / n] * n + perm[v % n]).collect();
        EntryPoly { n, poly: self.poly.relabel(&map, n * n).expect("relabelling within the same space") }
    }
}

/// A symmetric polynomial in n variables.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPoly(ExactPoly);

impl SymPoly {
    pub fn new(poly: ExactPoly) -> Result<Self> {
        if is_symmetric(&poly) {
            Ok(SymPoly(poly))
        } else {
            Err(Error::NotSymmetric)
        }
    }

    pub fn poly(&self) -> &ExactPoly {
        &self.0
    }

    pub fn into_poly(self) -> ExactPoly {
        self.0
    }
}

/// An alternating polynomial in n variables.
#[derive(Clone, Debug, PartialEq)]
pub struct AltPoly(ExactPoly);

impl AltPoly {
    pub fn new(poly: ExactPoly) -> Result<Self> {
        if is_alternating(&poly) {
            Ok(AltPoly(poly))
        } else {
            Err(Error::NotAlternating)
        }
    }

    pub fn poly(&self) -> &ExactPoly {
        &self.0
    }

    pub fn into_poly(self) -> ExactPoly {
        self.0
    }
}

/// Expands trace polynomials into matrix entries at a fixed dimension,
/// caching Tr(z^k) for each k it has seen.
#[derive(Clone, Debug)]
pub struct TraceExpander {
    n: usize,
    traces: Vec<ExactPoly>,
}

impl TraceExpander {
    pub fn new(n: usize) -> Self {
        TraceExpander { n, traces: Vec::new() }
    }

    /// Tr(z^k) as a sum over closed index paths i₁→i₂→…→i_k→i₁.
    fn trace_power(n: usize, k: usize) -> ExactPoly {
        let mut out = ExactPoly::zero(n * n);
        let mut path = alloc::vec![0usize; k];
        loop {
            let index = MultiIndex::from_pairs((0..k).map(|s| (path[s] * n + path[(s + 1) % k], 1)));
            out = &out + &ExactPoly::monomial(n * n, index, GaussianRational::one()).expect("entry in range");
            let mut pos = 0;
            loop {
                if pos == k {
                    return out;
                }
                path[pos] += 1;
                if path[pos] < n {
                    break;
                }
                path[pos] = 0;
                pos += 1;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Caches Tr(z^k) for k ≤ m.
    pub fn prepare(&mut self, m: usize) {
        while self.traces.len() < m {
            let k = self.traces.len() + 1;
            self.traces.push(Self::trace_power(self.n, k));
        }
    }

    /// Uses the cache where it reaches and computes higher traces on the fly.
    pub fn expand(&self, f: &TracePoly) -> EntryPoly {
        let m = f.n_generators();
        let extra: Vec<ExactPoly> = (self.traces.len() + 1..=m).map(|k| Self::trace_power(self.n, k)).collect();
        let images: Vec<ExactPoly> = self.traces.iter().take(m).chain(extra.iter()).cloned().collect();
        let poly = f.poly().compose(&images).expect("one image per generator");
        EntryPoly { n: self.n, poly }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("matrix dimension must be at least 1"))
    } else {
        Ok(())
    }
}

/// Substitutes t_k ↦ Tr(z^k) in the n² entry variables.
pub fn expand_to_entries(f: &TracePoly, n: usize) -> Result<EntryPoly> {
    check_dim(n)?;
    Ok(TraceExpander::new(n).expand(f))
}

/// F|_D: substitutes t_k ↦ x₁^k + … + x_n^k.
pub fn restrict_to_diagonal(f: &TracePoly, n: usize) -> Result<SymPoly> {
    check_dim(n)?;
    let images: Vec<ExactPoly> = (1..=f.n_generators()).map(|k| power_sum(n, k as u32)).collect();
    Ok(SymPoly(f.poly().compose(&images)?))
}

/// ψ(F) = c · a_δ · F|_D, with c carried symbolically.
pub fn psi_map(f: &TracePoly, n: usize) -> Result<Scaled<AltPoly>> {
    let restricted = restrict_to_diagonal(f, n)?;
    let a_delta = alternant(&staircase(n))?;
    Ok(Scaled::new(norm_const_c(n), AltPoly(&a_delta * restricted.poly())))
}

/// Writes a symmetric polynomial in the power sums p₁,…,p_n, by peeling off
/// products of elementary symmetric polynomials and converting those with
/// Newton's identities.
pub fn symmetric_to_power_sums(s: &ExactPoly, n: usize) -> Result<PowerSumPoly> {
    if s.n_vars() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s.n_vars() });
    }
    check_dim(n)?;
    let elementary: Vec<ExactPoly> = (1..=n).map(|k| elementary_symmetric(n, k)).collect();
    let mut powers: Vec<Vec<ExactPoly>> = elementary.iter().map(|e| alloc::vec![ExactPoly::one(n), e.clone()]).collect();
    let mut rem = s.clone();
    let mut in_elementary = ExactPoly::zero(n);
    while let Some((lead, c)) = rem.leading_term() {
        let d = lead.to_dense(n);
        if d.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSymmetric);
        }
        let c = c.clone();
        let exps: Vec<u32> = (0..n).map(|k| d[k] - d.get(k + 1).copied().unwrap_or(0)).collect();
        let mut product = ExactPoly::constant(n, c.clone());
        for (k, &e) in exps.iter().enumerate() {
            let cache = &mut powers[k];
            while cache.len() <= e as usize {
                let next = &cache[cache.len() - 1] * &elementary[k];
                cache.push(next);
            }
            product = &product * &cache[e as usize];
        }
        rem = &rem - &product;
        in_elementary = &in_elementary + &ExactPoly::monomial(n, MultiIndex::from_dense(&exps), c)?;
    }
    let images: Vec<ExactPoly> = elementary_in_power_sums(n).into_iter().map(PowerSumPoly::into_poly).collect();
    Ok(PowerSumPoly::new(in_elementary.compose(&images)?))
}

/// e_k(x₁,…,x_n).
pub fn elementary_symmetric(n: usize, k: usize) -> ExactPoly {
    let mut acc = ExactPoly::zero(n);
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize == k {
            let index = MultiIndex::from_dense(&(0..n).map(|i| ((mask >> i) & 1) as u32).collect::<Vec<_>>());
            acc = &acc + &ExactPoly::monomial(n, index, GaussianRational::one()).expect("in range");
        }
    }
    acc
}

/// e_1,…,e_n in p₁,…,p_n via k·e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} p_i.
pub fn elementary_in_power_sums(n: usize) -> Vec<PowerSumPoly> {
    let mut e: Vec<ExactPoly> = alloc::vec![ExactPoly::one(n)];
    for k in 1..=n {
        let mut acc = ExactPoly::zero(n);
        for i in 1..=k {
            let p_i = ExactPoly::var(n, i - 1).expect("generator in range");
            let term = &e[k - i] * &p_i;
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&GaussianRational::from_ratio(1, k as i64)));
    }
    e.into_iter().skip(1).map(PowerSumPoly::new).collect()
}

/// ψ⁻¹: divides by a_δ, rewrites the symmetric quotient in power sums,
/// lifts p_k ↦ t_k and divides the scale by c.
pub fn psi_inverse(g: &Scaled<ExactPoly>, n: usize) -> Result<Scaled<TracePoly>> {
    if g.body.n_vars() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.body.n_vars() });
    }
    if !is_alternating(&g.body) {
        return Err(Error::NotAlternating);
    }
    let (quotient, remainder) = g.body.div_rem(&alternant(&staircase(n))?)?;
    if !remainder.is_zero() {
        return Err(Error::NotInImage);
    }
    let ps = symmetric_to_power_sums(&quotient, n)?;
    let inv_c = Radical::sqrt(BigRational::from_integer(BigInt::from(superfactorial(n))))?;
    Ok(Scaled::new(&g.scale * &inv_c, TracePoly::from_power_sums(&ps)))
}

/// χ_λ = s_λ of the eigenvalues, expressed in the trace generators.
pub fn chi_lambda(lambda: &Partition) -> TracePoly {
    chi_lambda_with(lambda, &mut CharacterTable::new())
}

pub fn chi_lambda_with(lambda: &Partition, table: &mut CharacterTable) -> TracePoly {
    TracePoly::from_power_sums(&schur_to_power_sums_with(lambda, table))
}

/// e_λ = √(δ!/(λ+δ)!) · χ_λ at dimension n.
pub fn e_lambda(lambda: &Partition, n: usize) -> Result<Scaled<TracePoly>> {
    e_lambda_with(lambda, n, &mut CharacterTable::new())
}

pub fn e_lambda_with(lambda: &Partition, n: usize, table: &mut CharacterTable) -> Result<Scaled<TracePoly>> {
    let mu = shifted(lambda, n)?;
    let ratio = BigRational::new(BigInt::from(vector_factorial(&staircase(n))), BigInt::from(vector_factorial(&mu)));
    Ok(Scaled::new(Radical::sqrt(ratio)?, chi_lambda_with(lambda, table)))
}

/// ⟨F, G⟩ in the Segal–Bargmann space on n×n matrices.
pub fn invariant_inner(f: &TracePoly, g: &TracePoly, n: usize) -> Result<GaussianRational> {
    check_dim(n)?;
    let ex = TraceExpander::new(n);
    ex.expand(f).poly().bargmann_inner(ex.expand(g).poly())
}

/// ⟨F, G⟩ for scaled trace polynomials, with radicals combined exactly.
pub fn scaled_invariant_inner(f: &Scaled<TracePoly>, g: &Scaled<TracePoly>, ex: &TraceExpander) -> Result<Radical> {
    let ip = ex.expand(&f.body).poly().bargmann_inner(ex.expand(&g.body).poly())?;
    Ok((&f.scale.conj() * &g.scale).mul_gaussian(&ip))
}

/// Both sides of an exact identity and whether they agree.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

impl<T: PartialEq> ExactCheck<T> {
    pub fn new(lhs: T, rhs: T) -> Self {
        let holds = lhs == rhs;
        ExactCheck { lhs, rhs, holds }
    }
}

/// ⟨F, G⟩ against ⟨ψF, ψG⟩ = c²·⟨a_δF|_D, a_δG|_D⟩.
pub fn verify_unitarity(f: &TracePoly, g: &TracePoly, n: usize) -> Result<ExactCheck<GaussianRational>> {
    verify_unitarity_with(f, g, &TraceExpander::new(n))
}

pub fn verify_unitarity_with(f: &TracePoly, g: &TracePoly, ex: &TraceExpander) -> Result<ExactCheck<GaussianRational>> {
    let n = ex.n;
    let lhs = ex.expand(f).poly().bargmann_inner(ex.expand(g).poly())?;
    let pf = psi_map(f, n)?;
    let pg = psi_map(g, n)?;
    let ip = pf.body.poly().bargmann_inner(pg.body.poly())?;
    let rhs = ip.scale_real(&norm_const_c_squared(n));
    Ok(ExactCheck::new(lhs, rhs))
}

/// Δ(x)·(F(∂)G)|_D(x) against F|_D(∂₁,…,∂_n)(Δ·G|_D)(x), as polynomials in x.
pub fn verify_diffop_identity(f: &TracePoly, g: &TracePoly, n: usize) -> Result<ExactCheck<ExactPoly>> {
    verify_diffop_identity_with(f, g, &TraceExpander::new(n))
}

pub fn verify_diffop_identity_with(f: &TracePoly, g: &TracePoly, ex: &TraceExpander) -> Result<ExactCheck<ExactPoly>> {
    let n = ex.n;
    let a_delta = alternant(&staircase(n))?;
    let fe = ex.expand(f);
    let ge = ex.expand(g);
    let applied = EntryPoly { n, poly: fe.poly().apply_diff_operator(ge.poly())? };
    let lhs = &a_delta * &applied.restrict_to_diagonal();
    let f_d = restrict_to_diagonal(f, n)?;
    let g_d = restrict_to_diagonal(g, n)?;
    let rhs = f_d.poly().apply_diff_operator(&(&a_delta * g_d.poly()))?;
    Ok(ExactCheck::new(lhs, rhs))
}

/// f_λ = coefficient of x^{λ+δ} in a_δ·F|_D, for |λ| ≤ `max_weight`, ℓ(λ) ≤ n.
///
/// Zero coefficients are omitted.
pub fn fourier_coefficients(f: &TracePoly, n: usize, max_weight: u32) -> Result<BTreeMap<Partition, GaussianRational>> {
    if f.weighted_degree().unwrap_or(0) > max_weight {
        return Err(Error::InvalidArgument("trace polynomial exceeds max_weight"));
    }
    let a_delta = alternant(&staircase(n))?;
    let product = &a_delta * restrict_to_diagonal(f, n)?.poly();
    let mut out = BTreeMap::new();
    for lambda in enumerate_partitions(max_weight, n) {
        let coeff = product.coefficient(&MultiIndex::from_dense(&shifted(&lambda, n)?));
        if !coeff.is_zero() {
            out.insert(lambda, coeff);
        }
    }
    Ok(out)
}

/// Σ_λ f_λ χ_λ.
pub fn reconstruct_from_characters(coeffs: &BTreeMap<Partition, GaussianRational>) -> TracePoly {
    let mut table = CharacterTable::new();
    coeffs
        .iter()
        .fold(TracePoly::zero(), |acc, (lambda, c)| &acc + &chi_lambda_with(lambda, &mut table).scale(c))
}

/// Whether Σ_λ f_λ χ_λ and F agree as functions at dimension n.
///
/// Trace presentations with t_k for k > n are compared after restriction,
/// since Cayley–Hamilton relations make the presentation non-unique there.
pub fn fourier_round_trip(f: &TracePoly, n: usize, max_weight: u32) -> Result<bool> {
    let coeffs = fourier_coefficients(f, n, max_weight)?;
    let rebuilt = reconstruct_from_characters(&coeffs);
    Ok(restrict_to_diagonal(&rebuilt, n)? == restrict_to_diagonal(f, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::{d_lambda, permutations, schur_exact};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn int(k: i64) -> GaussianRational {
        GaussianRational::from_integer(k)
    }

    fn z(n: usize, i: usize, j: usize) -> ExactPoly {
        ExactPoly::var(n * n, i * n + j).unwrap()
    }

    #[test]
    fn trace_expansions() {
        let t1 = expand_to_entries(&TracePoly::t(1), 2).unwrap();
        assert_eq!(*t1.poly(), &z(2, 0, 0) + &z(2, 1, 1));
        let t2 = expand_to_entries(&TracePoly::t(2), 2).unwrap();
        let expected = &(&z(2, 0, 0).pow(2) + &(&z(2, 0, 1) * &z(2, 1, 0)).scale(&int(2))) + &z(2, 1, 1).pow(2);
        assert_eq!(*t2.poly(), expected);
    }

    #[test]
    fn expansion_is_a_ring_homomorphism() {
        let f = &(&TracePoly::t(1) * &TracePoly::t(2)) + &TracePoly::constant(GaussianRational::from_ratio(3, 2));
        let g = &TracePoly::t(3) - &TracePoly::t(1).scale(&GaussianRational::i());
        for n in 1..=3 {
            let ex = TraceExpander::new(n);
            let lhs = ex.expand(&(&f * &g));
            assert_eq!(*lhs.poly(), ex.expand(&f).poly() * ex.expand(&g).poly());
        }
    }

    #[test]
    fn expansions_are_conjugation_invariant() {
        for n in 1..=3 {
            let mut ex = TraceExpander::new(n);
            ex.prepare(4);
            for f in trace_monomials(4) {
                let e = ex.expand(&f);
                for (perm, _) in permutations(n) {
                    assert_eq!(e.conjugate_by_permutation(&perm), e);
                }
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let x = |i| ExactPoly::var(2, i).unwrap();
        assert_eq!(*restrict_to_diagonal(&TracePoly::t(1), 2).unwrap().poly(), &x(0) + &x(1));
        let f = &TracePoly::t(2) * &TracePoly::t(1);
        let expected = &(&x(0).pow(2) + &x(1).pow(2)) * &(&x(0) + &x(1));
        assert_eq!(*restrict_to_diagonal(&f, 2).unwrap().poly(), expected);
        // two routes to F|_D agree
        for n in 1..=3 {
            for f in trace_monomials(5) {
                let via_entries = expand_to_entries(&f, n).unwrap().restrict_to_diagonal();
                assert_eq!(via_entries, *restrict_to_diagonal(&f, n).unwrap().poly());
            }
        }
    }

    #[test]
    fn psi_of_simple_polys() {
        let one = psi_map(&TracePoly::one(), 2).unwrap();
        assert_eq!(one.scale, norm_const_c(2));
        assert_eq!(*one.body.poly(), alternant(&[1, 0]).unwrap());
        let t1 = psi_map(&TracePoly::t(1), 2).unwrap();
        assert_eq!(*t1.body.poly(), alternant(&[2, 0]).unwrap());
    }

    #[test]
    fn psi_maps_e_lambda_to_d_lambda() {
        let mut table = CharacterTable::new();
        for n in 1..=3 {
            for lambda in enumerate_partitions(4, n) {
                let e = e_lambda_with(&lambda, n, &mut table).unwrap();
                let image = psi_map(&e.body, n).unwrap();
                let psi_e = Scaled::new(&e.scale * &image.scale, image.body.into_poly());
                assert!(psi_e.exact_eq(&d_lambda(&lambda, n).unwrap()), "λ={lambda}, n={n}");
            }
        }
    }

    #[test]
    fn psi_inverse_examples() {
        let g = Scaled::new(norm_const_c(2), alternant(&staircase(2)).unwrap());
        let f = psi_inverse(&g, 2).unwrap();
        assert!(f.scale.is_one());
        assert_eq!(f.body, TracePoly::one());

        let d = d_lambda(&p(&[2, 1]), 2).unwrap();
        let back = psi_inverse(&d, 2).unwrap();
        let e = e_lambda(&p(&[2, 1]), 2).unwrap();
        assert_eq!(back.scale, e.scale);
        assert_eq!(restrict_to_diagonal(&back.body, 2).unwrap(), restrict_to_diagonal(&e.body, 2).unwrap());

        let not_alt = Scaled::unit(ExactPoly::var(2, 0).unwrap());
        assert_eq!(psi_inverse(&not_alt, 2), Err(Error::NotAlternating));
    }

    #[test]
    fn psi_round_trip_in_low_generators() {
        // with only t_1..t_n the presentation is unique, so the round trip is literal
        let f = &(&TracePoly::t(1).pow_for_test(3) + &TracePoly::t(2).scale(&GaussianRational::from_ratio(-2, 3)))
            + &(&TracePoly::t(1) * &TracePoly::t(2)).scale(&GaussianRational::i());
        let n = 2;
        let image = psi_map(&f, n).unwrap();
        let back = psi_inverse(&image.map(AltPoly::into_poly), n).unwrap();
        assert!(back.scale.is_one());
        assert_eq!(back.body, f);
    }

    impl TracePoly {
        fn pow_for_test(&self, k: u32) -> TracePoly {
            TracePoly(self.0.pow(k))
        }
    }

    #[test]
    fn characters_in_traces() {
        assert_eq!(chi_lambda(&p(&[1])), TracePoly::t(1));
        let half = GaussianRational::from_ratio(1, 2);
        let expected = &(&TracePoly::t(1) * &TracePoly::t(1)).scale(&half) + &TracePoly::t(2).scale(&half);
        assert_eq!(chi_lambda(&p(&[2])), expected);
        for n in 1..=3 {
            for lambda in enumerate_partitions(5, n) {
                assert_eq!(*restrict_to_diagonal(&chi_lambda(&lambda), n).unwrap().poly(), schur_exact(&lambda, n).unwrap());
            }
        }
    }

    #[test]
    fn e_lambda_scales() {
        let e0 = e_lambda(&Partition::empty(), 3).unwrap();
        assert!(e0.scale.is_one());
        assert_eq!(e0.body, TracePoly::one());
        let e1 = e_lambda(&p(&[1]), 2).unwrap();
        assert_eq!(e1.scale.square(), GaussianRational::from_ratio(1, 2));
        let ex = TraceExpander::new(2);
        assert!(scaled_invariant_inner(&e1, &e1, &ex).unwrap().is_one());
    }

    #[test]
    fn ginibre_inner_products() {
        for n in 1..=3 {
            assert_eq!(invariant_inner(&TracePoly::t(1), &TracePoly::t(1), n).unwrap(), int(n as i64));
            let ones = Partition::new(alloc::vec![1; n]).unwrap();
            let det = chi_lambda(&ones);
            let fact: i64 = (1..=n as i64).product();
            assert_eq!(invariant_inner(&det, &det, n).unwrap(), int(fact));
        }
        assert!(invariant_inner(&TracePoly::one(), &TracePoly::t(1), 2).unwrap().is_zero());
    }

    #[test]
    fn unitarity_examples() {
        let check = verify_unitarity(&TracePoly::one(), &TracePoly::one(), 3).unwrap();
        assert!(check.holds);
        assert_eq!(check.lhs, int(1));
        let check = verify_unitarity(&TracePoly::t(1), &TracePoly::t(1), 2).unwrap();
        assert!(check.holds);
        assert_eq!(check.rhs, int(2));
    }

    #[test]
    fn diffop_examples() {
        let g = &TracePoly::t(2) + &TracePoly::t(1);
        let check = verify_diffop_identity(&TracePoly::one(), &g, 2).unwrap();
        assert!(check.holds);
        let a_delta = alternant(&staircase(2)).unwrap();
        assert_eq!(check.lhs, &a_delta * restrict_to_diagonal(&g, 2).unwrap().poly());
        let check = verify_diffop_identity(&TracePoly::t(1), &TracePoly::t(1), 2).unwrap();
        assert!(check.holds);
        assert_eq!(check.lhs, a_delta.scale(&int(2)));
    }

    #[test]
    fn multiplication_intertwines_with_psi() {
        let fs = [TracePoly::t(1), &TracePoly::t(2) - &TracePoly::t(1), TracePoly::t(3).scale(&GaussianRational::i())];
        for n in 1..=3 {
            for f in &fs {
                for g in &fs {
                    let lhs = psi_map(&(f * g), n).unwrap();
                    let rhs = psi_map(g, n).unwrap();
                    let f_d = restrict_to_diagonal(f, n).unwrap();
                    assert_eq!(*lhs.body.poly(), f_d.poly() * rhs.body.poly());
                    assert_eq!(lhs.scale, rhs.scale);
                }
            }
        }
    }

    #[test]
    fn fourier_examples() {
        let coeffs = fourier_coefficients(&chi_lambda(&p(&[2, 1])), 3, 3).unwrap();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs[&p(&[2, 1])], int(1));
        let t1sq = &TracePoly::t(1) * &TracePoly::t(1);
        let coeffs = fourier_coefficients(&t1sq, 2, 2).unwrap();
        assert_eq!(coeffs.len(), 2);
        assert_eq!(coeffs[&p(&[2])], int(1));
        assert_eq!(coeffs[&p(&[1, 1])], int(1));
        let coeffs = fourier_coefficients(&TracePoly::one(), 3, 0).unwrap();
        assert_eq!(coeffs[&Partition::empty()], int(1));
        assert!(fourier_coefficients(&TracePoly::t(3), 2, 2).is_err());
        assert!(fourier_round_trip(&(&t1sq + &TracePoly::t(3)), 2, 3).unwrap());
    }

    #[test]
    fn power_sum_conversion() {
        for n in 1..=3 {
            for lambda in enumerate_partitions(5, n) {
                let s = schur_exact(&lambda, n).unwrap();
                let ps = symmetric_to_power_sums(&s, n).unwrap();
                assert!(ps.poly().n_vars() <= n);
                assert_eq!(ps.substitute(n), s);
            }
        }
        let not_sym = ExactPoly::var(2, 1).unwrap();
        assert_eq!(symmetric_to_power_sums(&not_sym, 2), Err(Error::NotSymmetric));
    }
}
