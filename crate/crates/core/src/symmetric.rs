//! Alternants, Schur polynomials, power sums and the normalized bases.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::linalg::det_in_place;
use crate::partition::{partitions_of, Partition};
use crate::poly::{ExactPoly, MultiIndex};
use crate::scalar::{factorial, GaussianRational, Radical};
use crate::scaled::Scaled;

/// All permutations of `0..n` paired with their signs (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut sign = 1i64;
    let mut out = vec![(perm.clone(), sign)];
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(j, i);
            sign = -sign;
            out.push((perm.clone(), sign));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    out
}

/// δ = (n−1, n−2, …, 0).
pub fn staircase(n: usize) -> Vec<u32> {
    (0..n as u32).rev().collect()
}

/// λ + δ in dimension `n`; strictly decreasing.
pub fn shifted(lambda: &Partition, n: usize) -> Result<Vec<u32>> {
    let mut v = lambda.padded(n)?;
    for (x, d) in v.iter_mut().zip(staircase(n)) {
        *x += d;
    }
    Ok(v)
}

/// μ! = ∏ μ_i!
pub fn vector_factorial(mu: &[u32]) -> BigUint {
    mu.iter().fold(BigUint::one(), |acc, &m| acc * factorial(m))
}

/// ∏_{p=1}^{n} p!
pub fn superfactorial(n: usize) -> BigUint {
    (1..=n as u32).fold(BigUint::one(), |acc, p| acc * factorial(p))
}

/// The alternant a_μ = det[x_i^{μ_j}] in `μ.len()` variables.
pub fn alternant(mu: &[u32]) -> Result<ExactPoly> {
    let n = mu.len();
    let mut sorted = mu.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateExponents);
    }
    ExactPoly::from_terms(
        n,
        permutations(n).into_iter().map(|(sigma, sign)| {
            let index = MultiIndex::from_dense(&sigma.iter().map(|&s| mu[s]).collect::<Vec<_>>());
            (index, GaussianRational::from_integer(sign))
        }),
    )
}

/// Δ(x) = ∏_{i<j} (x_j − x_i), the product convention of the HCIZ formula.
pub fn vandermonde(n: usize) -> ExactPoly {
    let mut acc = ExactPoly::one(n);
    for i in 0..n {
        for j in i + 1..n {
            let diff = &ExactPoly::var(n, j).unwrap() - &ExactPoly::var(n, i).unwrap();
            acc = &acc * &diff;
        }
    }
    acc
}

/// The sign s with `vandermonde(n) == s · alternant(δ)`, namely (−1)^{n(n−1)/2}.
pub fn vandermonde_sign(n: usize) -> i64 {
    if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Applies the transposition of variables `i` and `j`.
pub fn swap_vars(f: &ExactPoly, i: usize, j: usize) -> ExactPoly {
    let n = f.n_vars();
    let mut map: Vec<usize> = (0..n).collect();
    map.swap(i, j);
    f.relabel(&map, n).expect("relabelling within the same space")
}

pub fn is_symmetric(f: &ExactPoly) -> bool {
    (1..f.n_vars()).all(|k| swap_vars(f, k - 1, k) == *f)
}

pub fn is_alternating(f: &ExactPoly) -> bool {
    (1..f.n_vars()).all(|k| swap_vars(f, k - 1, k) == -f)
}

/// P F = (1/n!) Σ_σ sgn(σ) σF, the orthogonal projection onto alternating polynomials.
pub fn alternating_projection(f: &ExactPoly) -> ExactPoly {
    let n = f.n_vars();
    let mut acc = ExactPoly::zero(n);
    for (sigma, sign) in permutations(n) {
        let moved = f.relabel(&sigma, n).expect("relabelling within the same space");
        acc = if sign > 0 { &acc + &moved } else { &acc - &moved };
    }
    let inv_fact = BigRational::new(BigInt::one(), BigInt::from(factorial(n as u32)));
    acc.scale(&GaussianRational::from_real(inv_fact))
}

/// s_λ(x₁,…,x_n) as the exact bialternant a_{λ+δ}/a_δ.
pub fn schur_exact(lambda: &Partition, n: usize) -> Result<ExactPoly> {
    let numerator = alternant(&shifted(lambda, n)?)?;
    numerator.exact_div(&alternant(&staircase(n))?)
}

/// Complete homogeneous symmetric polynomials h_0..=h_max at a point, from
/// power sums through Newton's identities k·h_k = Σ_{i=1}^{k} p_i h_{k−i}.
pub fn complete_homogeneous(eigs: &[Complex64], max_degree: usize) -> Vec<Complex64> {
    let mut p = vec![Complex64::new(0.0, 0.0); max_degree + 1];
    let mut powers: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); eigs.len()];
    for pk in p.iter_mut().skip(1) {
        for (pw, &x) in powers.iter_mut().zip(eigs) {
            *pw *= x;
            *pk += *pw;
        }
    }
    let mut h = vec![Complex64::new(0.0, 0.0); max_degree + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for k in 1..=max_degree {
        let s: Complex64 = (1..=k).map(|i| p[i] * h[k - i]).sum();
        h[k] = s / k as f64;
    }
    h
}

/// Evaluates Schur polynomials at a fixed point through the Jacobi–Trudi
/// determinant s_λ = det[h_{λ_i − i + j}].
#[derive(Clone, Debug)]
pub struct SchurEvaluator {
    n: usize,
    h: Vec<Complex64>,
}

impl SchurEvaluator {
    pub fn new(eigs: &[Complex64], max_weight: usize) -> Self {
        SchurEvaluator { n: eigs.len(), h: complete_homogeneous(eigs, max_weight) }
    }

    fn h(&self, k: i64) -> Complex64 {
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.h[k as usize]
        }
    }

    /// s_λ at the stored point; zero when ℓ(λ) exceeds the number of variables.
    pub fn eval(&self, lambda: &Partition) -> Complex64 {
        let len = lambda.length();
        if len > self.n {
            return Complex64::new(0.0, 0.0);
        }
        assert!((lambda.weight() as usize) < self.h.len(), "evaluator built for a smaller weight");
        let parts = lambda.parts();
        let mut m = Vec::with_capacity(len * len);
        for (i, &li) in parts.iter().enumerate() {
            for j in 0..len {
                m.push(self.h(li as i64 - i as i64 + j as i64));
            }
        }
        det_in_place(&mut m, len)
    }
}

/// s_λ(eigs) via Jacobi–Trudi; finite and stable at coincident arguments.
pub fn schur_numeric(lambda: &Partition, eigs: &[Complex64]) -> Complex64 {
    SchurEvaluator::new(eigs, lambda.weight() as usize).eval(lambda)
}

/// A polynomial in the power sums p₁, p₂, …; variable `k−1` stands for p_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumPoly(ExactPoly);

impl PowerSumPoly {
    pub fn new(poly: ExactPoly) -> Self {
        PowerSumPoly(poly)
    }

    /// The generator p_k as a polynomial over `max(k, 1)` generators.
    pub fn generator(k: usize) -> Self {
        PowerSumPoly(ExactPoly::var(k, k - 1).expect("generator index in range"))
    }

    pub fn poly(&self) -> &ExactPoly {
        &self.0
    }

    pub fn into_poly(self) -> ExactPoly {
        self.0
    }

    /// Degree with deg(p_k) = k.
    pub fn weighted_degree(&self) -> Option<u32> {
        weighted_degree(&self.0)
    }

    /// Substitutes p_k ↦ Σ_{i≤n} x_i^k.
    pub fn substitute(&self, n: usize) -> ExactPoly {
        let images: Vec<ExactPoly> = (1..=self.0.n_vars()).map(|k| power_sum(n, k as u32)).collect();
        if images.is_empty() {
            return ExactPoly::constant(n, self.0.eval_at_zero());
        }
        self.0.compose(&images).expect("images share the target dimension")
    }
}

impl fmt::Display for PowerSumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_generator_poly(f, &self.0, 'p')
    }
}

/// Σ_{i≤n} x_i^k as an exact polynomial in `n` variables.
pub fn power_sum(n: usize, k: u32) -> ExactPoly {
    ExactPoly::from_terms(n, (0..n).map(|i| (MultiIndex::var_pow(i, k), GaussianRational::one())))
        .expect("variables in range")
}

/// Degree under deg(generator k−1) = k; shared by power-sum and trace polynomials.
pub fn weighted_degree(poly: &ExactPoly) -> Option<u32> {
    poly.terms().map(|(m, _)| m.iter().map(|(v, e)| (v as u32 + 1) * e).sum()).max()
}

/// `(re, im) g1^2 g3` terms in descending graded-lex order, joined by ` + `.
/// Renders a polynomial with its variables named `{symbol}1, {symbol}2, …`.
pub struct Named<'a>(pub &'a ExactPoly, pub char);

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_generator_poly(f, self.0, self.1)
    }
}

pub(crate) fn write_generator_poly(f: &mut fmt::Formatter<'_>, poly: &ExactPoly, symbol: char) -> fmt::Result {
    if poly.is_zero() {
        return f.write_str("0");
    }
    for (k, (m, c)) in poly.terms().rev().enumerate() {
        if k > 0 {
            f.write_str(" + ")?;
        }
        crate::poly::write_coeff_pair(f, c)?;
        for (v, e) in m.iter() {
            if e == 1 {
                write!(f, " {symbol}{}", v + 1)?;
            } else {
                write!(f, " {symbol}{}^{e}", v + 1)?;
            }
        }
    }
    Ok(())
}

fn beta_numbers(lambda: &[u32]) -> Vec<u32> {
    let l = lambda.len() as u32;
    lambda.iter().enumerate().map(|(i, &p)| p + l - 1 - i as u32).collect()
}

fn from_beta(beta: &mut [u32]) -> Vec<u32> {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let l = beta.len() as u32;
    let mut parts: Vec<u32> = beta.iter().enumerate().map(|(i, &b)| b - (l - 1 - i as u32)).collect();
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}

/// Irreducible characters of the symmetric group by the Murnaghan–Nakayama
/// rule, memoized over (remaining shape, remaining cycle lengths).
#[derive(Default, Debug)]
pub struct CharacterTable {
    memo: BTreeMap<(Vec<u32>, Vec<u32>), i64>,
}

impl CharacterTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// χ^λ(ρ); zero when the weights differ.
    pub fn character(&mut self, lambda: &Partition, rho: &Partition) -> i64 {
        if lambda.weight() != rho.weight() {
            return 0;
        }
        self.chi(lambda.parts(), rho.parts())
    }

    fn chi(&mut self, shape: &[u32], cycles: &[u32]) -> i64 {
        let Some((&k, rest)) = cycles.split_first() else {
            return 1;
        };
        let key = (shape.to_vec(), cycles.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let beta = beta_numbers(shape);
        let mut total = 0;
        for (idx, &b) in beta.iter().enumerate() {
            if b < k || beta.contains(&(b - k)) {
                continue;
            }
            // leg length = number of beads jumped over
            let height = beta.iter().filter(|&&c| c > b - k && c < b).count();
            let mut moved = beta.clone();
            moved[idx] = b - k;
            let smaller = from_beta(&mut moved);
            let sign = if height % 2 == 0 { 1 } else { -1 };
            total += sign * self.chi(&smaller, rest);
        }
        self.memo.insert(key, total);
        total
    }
}

/// s_λ = Σ_{ρ ⊢ |λ|} χ^λ(ρ) p_ρ / z_ρ.
pub fn schur_to_power_sums(lambda: &Partition) -> PowerSumPoly {
    schur_to_power_sums_with(lambda, &mut CharacterTable::new())
}

pub fn schur_to_power_sums_with(lambda: &Partition, table: &mut CharacterTable) -> PowerSumPoly {
    let w = lambda.weight();
    let n_gens = (w as usize).max(1);
    let terms = partitions_of(w, w as usize).into_iter().map(|rho| {
        let chi = table.character(lambda, &rho);
        let coeff = BigRational::new(BigInt::from(chi), BigInt::from(rho.centralizer_order()));
        let index = MultiIndex::from_pairs(rho.parts().iter().map(|&k| (k as usize - 1, 1)));
        (index, GaussianRational::from_real(coeff))
    });
    PowerSumPoly(ExactPoly::from_terms(n_gens, terms).expect("generators in range"))
}

/// d_λ = a_{λ+δ} / √(n!·(λ+δ)!), with the normalization kept exact.
pub fn d_lambda(lambda: &Partition, n: usize) -> Result<Scaled<ExactPoly>> {
    let mu = shifted(lambda, n)?;
    let norm = factorial(n as u32) * vector_factorial(&mu);
    let scale = Radical::sqrt(BigRational::new(BigInt::one(), BigInt::from(norm)))?;
    Ok(Scaled::new(scale, alternant(&mu)?))
}

/// c = (∏_{p=1}^{n} p!)^{−1/2}.
pub fn norm_const_c(n: usize) -> Radical {
    Radical::sqrt(BigRational::new(BigInt::one(), BigInt::from(superfactorial(n))))
        .expect("superfactorial is positive")
}

/// c² as an exact rational.
pub fn norm_const_c_squared(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(superfactorial(n)))
}

/// ∏_{p=1}^{n−1} p!, the prefactor of the determinant formula; equals (1/c²)/n!.
pub fn hciz_prefactor(n: usize) -> BigUint {
    superfactorial(n.saturating_sub(1))
}
