//! Sparse multivariate polynomials with Gaussian-rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`MultiIndex`], whose ordering is
//! graded lexicographic, so iteration order is canonical and the last entry
//! is the leading term.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{factorial, GaussianRational};

/// Exponent vector z^α stored sparsely as sorted `(variable, exponent)` pairs.
///
/// Zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: Vec<(u32, u32)>,
}

impl MultiIndex {
    /// The empty index (the constant monomial).
    pub fn one() -> Self {
        MultiIndex { exps: Vec::new() }
    }

    pub fn var(v: usize) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        MultiIndex { exps: vec![(v as u32, e)] }
    }

    /// Builds from a dense exponent vector; entry `k` is the exponent of variable `k`.
    pub fn from_dense(exps: &[u32]) -> Self {
        MultiIndex {
            exps: exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (v as u32, e))
                .collect(),
        }
    }

    /// Builds from arbitrary `(variable, exponent)` pairs; repeated variables accumulate.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v as u32).or_insert(0) += e;
        }
        MultiIndex { exps: map.into_iter().filter(|&(_, e)| e > 0).collect() }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.exps
            .binary_search_by_key(&(v as u32), |&(var, _)| var)
            .map(|k| self.exps[k].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Largest variable id present, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.exps.last().map(|&(v, _)| v as usize)
    }

    pub fn to_dense(&self, n_vars: usize) -> Vec<u32> {
        let mut out = vec![0; n_vars];
        for (v, e) in self.iter() {
            out[v] = e;
        }
        out
    }

    /// z^α · z^β = z^(α+β).
    pub fn mul(&self, other: &MultiIndex) -> MultiIndex {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        MultiIndex { exps: out }
    }

    /// z^α / z^β, or `None` if β does not divide α.
    pub fn checked_div(&self, divisor: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            if j < divisor.exps.len() && divisor.exps[j].0 < v {
                return None;
            }
            if j < divisor.exps.len() && divisor.exps[j].0 == v {
                let d = divisor.exps[j].1;
                j += 1;
                match e.cmp(&d) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((v, e - d)),
                }
            } else {
                out.push((v, e));
            }
        }
        (j == divisor.exps.len()).then_some(MultiIndex { exps: out })
    }

    /// α! = α₁!·α₂!·…
    pub fn factorial(&self) -> BigUint {
        self.exps.iter().fold(BigUint::one(), |acc, &(_, e)| acc * factorial(e))
    }

    /// Applies a variable relabelling `v ↦ map[v]`.
    pub fn relabel(&self, map: &[usize]) -> MultiIndex {
        MultiIndex::from_pairs(self.iter().map(|(v, e)| (map[v], e)))
    }
}

impl Ord for MultiIndex {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// lowest-numbered variable where the two differ.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.exps.get(i);
            let b = other.exps.get(j);
            match (a, b) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // `self` has a positive exponent where `other` has zero
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `n_vars` variables with exact Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPoly {
    n_vars: usize,
    terms: BTreeMap<MultiIndex, GaussianRational>,
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a, found: b })
    }
}

impl ExactPoly {
    pub fn zero(n_vars: usize) -> Self {
        ExactPoly { n_vars, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, GaussianRational::one())
    }

    pub fn constant(n_vars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(MultiIndex::one(), c);
        p
    }

    /// The coordinate polynomial z_v.
    pub fn var(n_vars: usize, v: usize) -> Result<Self> {
        Self::monomial(n_vars, MultiIndex::var(v), GaussianRational::one())
    }

    pub fn monomial(n_vars: usize, index: MultiIndex, c: GaussianRational) -> Result<Self> {
        Self::from_terms(n_vars, [(index, c)])
    }

    /// Collects terms, merging repeated indices and dropping zero coefficients.
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, GaussianRational)>,
    {
        let mut p = Self::zero(n_vars);
        for (index, c) in terms {
            if let Some(v) = index.max_var() {
                if v >= n_vars {
                    return Err(Error::VariableOutOfRange { var: v, n_vars });
                }
            }
            p.add_term(index, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, index: MultiIndex, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            alloc::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += &c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &GaussianRational)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(MultiIndex::degree)
    }

    pub fn leading_term(&self) -> Option<(&MultiIndex, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, index: &MultiIndex) -> GaussianRational {
        self.terms.get(index).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// The part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> ExactPoly {
        ExactPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-embeds into a space with at least as many variables.
    pub fn widen(&self, n_vars: usize) -> Result<ExactPoly> {
        if n_vars < self.n_vars {
            if let Some(v) = self.terms.keys().filter_map(MultiIndex::max_var).max() {
                if v >= n_vars {
                    return Err(Error::VariableOutOfRange { var: v, n_vars });
                }
            }
        }
        Ok(ExactPoly { n_vars, terms: self.terms.clone() })
    }

    pub fn add(&self, other: &ExactPoly) -> Result<ExactPoly> {
        check_dims(self.n_vars, other.n_vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExactPoly) -> Result<ExactPoly> {
        check_dims(self.n_vars, other.n_vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &ExactPoly) -> Result<ExactPoly> {
        check_dims(self.n_vars, other.n_vars)?;
        let mut out = ExactPoly::zero(self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> ExactPoly {
        let mut acc = ExactPoly::one(self.n_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, k: &GaussianRational) -> ExactPoly {
        if k.is_zero() {
            return ExactPoly::zero(self.n_vars);
        }
        ExactPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// F* : every coefficient conjugated.
    pub fn conj_coeffs(&self) -> ExactPoly {
        ExactPoly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Formal partial derivative ∂F/∂z_var.
    pub fn diff(&self, var: usize) -> Result<ExactPoly> {
        if var >= self.n_vars {
            return Err(Error::VariableOutOfRange { var, n_vars: self.n_vars });
        }
        let step = MultiIndex::var(var);
        let mut out = ExactPoly::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e == 0 {
                continue;
            }
            let reduced = m.checked_div(&step).expect("exponent is positive");
            out.add_term(reduced, c * &GaussianRational::from_integer(e as i64));
        }
        Ok(out)
    }

    /// F(∂)G: each monomial z^α of F acts as ∂^α on G.
    pub fn apply_diff_operator(&self, g: &ExactPoly) -> Result<ExactPoly> {
        check_dims(self.n_vars, g.n_vars)?;
        let mut out = ExactPoly::zero(self.n_vars);
        for (alpha, fa) in &self.terms {
            for (beta, gb) in &g.terms {
                let Some(rest) = beta.checked_div(alpha) else { continue };
                // ∂^α z^β = (β!/(β-α)!) z^(β-α)
                let falling = alpha.iter().fold(BigUint::one(), |acc, (v, e)| {
                    let top = beta.exponent(v);
                    (top - e + 1..=top).fold(acc, |a, k| a * BigUint::from(k))
                });
                out.add_term(rest, &(fa * gb) * &GaussianRational::from_biguint(&falling));
            }
        }
        Ok(out)
    }

    /// Segal–Bargmann inner product ⟨F, G⟩ = Σ_α conj(f_α)·g_α·α!.
    ///
    /// Conjugate-linear in the first argument.
    pub fn bargmann_inner(&self, g: &ExactPoly) -> Result<GaussianRational> {
        check_dims(self.n_vars, g.n_vars)?;
        let (small, large, conj_small) = if self.terms.len() <= g.terms.len() {
            (&self.terms, &g.terms, true)
        } else {
            (&g.terms, &self.terms, false)
        };
        let mut acc = GaussianRational::zero();
        for (m, cs) in small {
            let Some(cl) = large.get(m) else { continue };
            let prod = if conj_small { &cs.conj() * cl } else { &cl.conj() * cs };
            acc += &(&prod * &GaussianRational::from_biguint(&m.factorial()));
        }
        Ok(acc)
    }

    /// Value of the constant term; equals evaluation at the origin.
    pub fn eval_at_zero(&self) -> GaussianRational {
        self.coefficient(&MultiIndex::one())
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        check_dims(self.n_vars, point.len())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mono = m.iter().fold(Complex64::new(1.0, 0.0), |p, (v, e)| p * point[v].powu(e));
            acc += c.to_complex64() * mono;
        }
        Ok(acc)
    }

    pub fn eval_exact(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        check_dims(self.n_vars, point.len())?;
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.iter() {
                for _ in 0..e {
                    term = &term * &point[v];
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// Substitutes z_v ↦ images[v]; all images must share one variable count.
    pub fn compose(&self, images: &[ExactPoly]) -> Result<ExactPoly> {
        check_dims(self.n_vars, images.len())?;
        let target = images.first().map(ExactPoly::n_vars).unwrap_or(0);
        for img in images {
            check_dims(target, img.n_vars)?;
        }
        let mut powers: Vec<Vec<ExactPoly>> = images.iter().map(|p| vec![ExactPoly::one(target), p.clone()]).collect();
        let mut out = ExactPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = ExactPoly::constant(target, c.clone());
            for (v, e) in m.iter() {
                let cache = &mut powers[v];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &images[v];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Relabels variables `v ↦ map[v]` into a space of `n_vars` variables.
    pub fn relabel(&self, map: &[usize], n_vars: usize) -> Result<ExactPoly> {
        check_dims(self.n_vars, map.len())?;
        ExactPoly::from_terms(n_vars, self.terms.iter().map(|(m, c)| (m.relabel(map), c.clone())))
    }

    /// Multivariate division with respect to graded-lex leading terms.
    ///
    /// Returns `(quotient, remainder)` with `self = quotient·divisor + remainder`
    /// and no term of the remainder divisible by the divisor's leading monomial.
    pub fn div_rem(&self, divisor: &ExactPoly) -> Result<(ExactPoly, ExactPoly)> {
        check_dims(self.n_vars, divisor.n_vars)?;
        let (lead_m, lead_c) = divisor
            .leading_term()
            .ok_or(Error::InvalidArgument("division by the zero polynomial"))?;
        let lead_inv = lead_c.inv().expect("leading coefficient is nonzero");
        let mut rem = self.clone();
        let mut quotient = ExactPoly::zero(self.n_vars);
        let mut remainder = ExactPoly::zero(self.n_vars);
        while let Some((m, c)) = rem.terms.pop_last() {
            match m.checked_div(lead_m) {
                Some(qm) => {
                    let qc = &c * &lead_inv;
                    for (dm, dc) in divisor.terms.iter().rev().skip(1) {
                        rem.add_term(dm.mul(&qm), -(&qc * dc));
                    }
                    quotient.add_term(qm, qc);
                }
                None => remainder.add_term(m, c),
            }
        }
        Ok((quotient, remainder))
    }

    /// Exact quotient; fails with [`Error::NonzeroRemainder`] if `divisor` does not divide.
    pub fn exact_div(&self, divisor: &ExactPoly) -> Result<ExactPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonzeroRemainder)
        }
    }
}

impl<'a> Add<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    /// Panics on mismatched variable counts; use [`ExactPoly::add`] to get an error instead.
    fn add(self, rhs: &ExactPoly) -> ExactPoly {
        ExactPoly::add(self, rhs).expect("polynomials over different variable counts")
    }
}

impl<'a> Sub<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    fn sub(self, rhs: &ExactPoly) -> ExactPoly {
        ExactPoly::sub(self, rhs).expect("polynomials over different variable counts")
    }
}

impl<'a> Mul<&'a ExactPoly> for &'a ExactPoly {
    type Output = ExactPoly;
    fn mul(self, rhs: &ExactPoly) -> ExactPoly {
        ExactPoly::mul(self, rhs).expect("polynomials over different variable counts")
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        self.scale(&GaussianRational::from_integer(-1))
    }
}

pub(crate) fn write_coeff_pair(f: &mut fmt::Formatter<'_>, c: &GaussianRational) -> fmt::Result {
    write!(f, "({}, {})", c.re, c.im)
}

/// Canonical form: terms in descending graded-lex order joined by ` + `,
/// each `(re, im) : v<i>^<e> ...`; the constant monomial is written `1`.
impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write_coeff_pair(f, c)?;
            f.write_str(" :")?;
            if m.is_one() {
                f.write_str(" 1")?;
            }
            for (v, e) in m.iter() {
                write!(f, " v{v}^{e}")?;
            }
        }
        Ok(())
    }
}
