//! Exact scalars: Gaussian rationals and rational multiples of square roots.

use alloc::format;
use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A complex number with arbitrary-precision rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        Self::from_real(BigRational::from_integer(BigInt::from(n.clone())))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|², always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn scale_real(&self, k: &BigRational) -> Self {
        GaussianRational { re: &self.re * k, im: &self.im * k }
    }

    /// Nearest double-precision complex value.
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_integer(1)
    }
}

impl Default for GaussianRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::from_real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        GaussianRational { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::from_real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

/// Renders as `p/q`, `p/qi` or `p/q+r/si`; integers drop the denominator.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}i", self.re, sign, self.im.abs())
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Parses the same forms [`fmt::Display`] produces.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".to_string()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::from_real(parse_rational(s)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (parse_rational(&body[..k])?, &body[k..]),
            None => (BigRational::zero(), body),
        };
        let im = match im {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(GaussianRational { re, im })
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a nonnegative rational, when it is itself rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(exact_sqrt(r.numer())?, exact_sqrt(r.denom())?))
}

/// A scalar of the form `coeff · √radicand` with `radicand > 0`.
///
/// The radicand is kept as a positive integer with small square factors
/// moved into the coefficient, and `radicand == 1` exactly when the value is
/// a plain Gaussian rational. Equality compares values, not representations.
#[derive(Clone, Debug)]
pub struct Radical {
    coeff: GaussianRational,
    radicand: BigRational,
}

impl Radical {
    pub fn new(coeff: GaussianRational, radicand: BigRational) -> Result<Self, Error> {
        if !radicand.is_positive() {
            return Err(Error::InvalidArgument("radicand must be positive"));
        }
        Ok(Self::normalized(coeff, radicand))
    }

    fn normalized(coeff: GaussianRational, radicand: BigRational) -> Self {
        if coeff.is_zero() {
            return Radical { coeff, radicand: BigRational::one() };
        }
        if let Some(root) = rational_sqrt(&radicand) {
            return Radical { coeff: coeff.scale_real(&root), radicand: BigRational::one() };
        }
        // √(p/q) = √(pq)/q, then pull out square factors k² of pq for small k
        let denom = radicand.denom().clone();
        let mut int = radicand.numer() * &denom;
        let mut outside = BigInt::one();
        let mut k = BigInt::from(2u32);
        let limit = BigInt::from(1000u32);
        while k < limit {
            let sq = &k * &k;
            if sq > int {
                break;
            }
            while (&int % &sq).is_zero() {
                int /= &sq;
                outside *= &k;
            }
            k += 1u32;
        }
        let scale = BigRational::new(outside, denom);
        let coeff = coeff.scale_real(&scale);
        match rational_sqrt(&BigRational::from_integer(int.clone())) {
            Some(root) => Radical { coeff: coeff.scale_real(&root), radicand: BigRational::one() },
            None => Radical { coeff, radicand: BigRational::from_integer(int) },
        }
    }

    /// `√r` for a positive rational `r`.
    pub fn sqrt(r: BigRational) -> Result<Self, Error> {
        Self::new(GaussianRational::one(), r)
    }

    pub fn one() -> Self {
        Self::from(GaussianRational::one())
    }

    pub fn coeff(&self) -> &GaussianRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.radicand.is_one() && self.coeff.is_one()
    }

    /// The value as a Gaussian rational, if the radical has cancelled.
    pub fn to_gaussian(&self) -> Option<GaussianRational> {
        self.radicand.is_one().then(|| self.coeff.clone())
    }

    pub fn conj(&self) -> Self {
        Radical { coeff: self.coeff.conj(), radicand: self.radicand.clone() }
    }

    /// x² (not |x|²); always rational.
    pub fn square(&self) -> GaussianRational {
        (&self.coeff * &self.coeff).scale_real(&self.radicand)
    }

    pub fn norm_sqr(&self) -> BigRational {
        self.coeff.norm_sqr() * &self.radicand
    }

    pub fn inv(&self) -> Option<Self> {
        let c = self.coeff.inv()?;
        Some(Self::normalized(c, self.radicand.recip()))
    }

    pub fn mul_gaussian(&self, k: &GaussianRational) -> Self {
        Self::normalized(&self.coeff * k, self.radicand.clone())
    }

    pub fn to_complex64(&self) -> Complex64 {
        let root = libm::sqrt(self.radicand.to_f64().unwrap_or(f64::NAN));
        self.coeff.to_complex64() * root
    }
}

/// a√r = b√s exactly when a/b is a positive rational with (a/b)² = s/r.
impl PartialEq for Radical {
    fn eq(&self, other: &Self) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return true,
            (false, false) => {}
            _ => return false,
        }
        if self.radicand == other.radicand {
            return self.coeff == other.coeff;
        }
        let q = self.coeff.checked_div(&other.coeff).expect("nonzero divisor");
        q.is_real() && q.re.is_positive() && &q.re * &q.re * &self.radicand == other.radicand
    }
}

impl Eq for Radical {}

impl From<GaussianRational> for Radical {
    fn from(coeff: GaussianRational) -> Self {
        Radical { coeff, radicand: BigRational::one() }
    }
}

impl<'a> Mul<&'a Radical> for &'a Radical {
    type Output = Radical;
    fn mul(self, rhs: &Radical) -> Radical {
        Radical::normalized(&self.coeff * &rhs.coeff, &self.radicand * &rhs.radicand)
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "({})*sqrt({})", self.coeff, self.radicand)
        }
    }
}

/// n! as an arbitrary-precision integer.
pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_agree() {
        for s in ["0", "3", "-3/2", "1/2i", "-i", "3/2+1/2i", "3/2-1/2i", "-1-7/3i"] {
            let z: GaussianRational = s.parse().unwrap();
            let back: GaussianRational = z.to_string().parse().unwrap();
            assert_eq!(z, back, "{s}");
        }
        assert_eq!("3/2+1/2i".parse::<GaussianRational>().unwrap().to_string(), "3/2+1/2i");
        assert_eq!("-i".parse::<GaussianRational>().unwrap(), -GaussianRational::i());
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("abc".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn conjugation_and_inverse() {
        let z = GaussianRational::new(BigRational::from_integer(3.into()), BigRational::from_integer(4.into()));
        assert_eq!(z.norm_sqr(), BigRational::from_integer(25.into()));
        assert_eq!(&z * &z.inv().unwrap(), GaussianRational::one());
        assert_eq!(z.conj().conj(), z);
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn radicals_fold_perfect_squares() {
        let r = Radical::sqrt(BigRational::new(4.into(), 9.into())).unwrap();
        assert_eq!(r.to_gaussian(), Some(GaussianRational::from_ratio(2, 3)));
        let half = Radical::sqrt(BigRational::new(1.into(), 2.into())).unwrap();
        assert!(half.to_gaussian().is_none());
        assert!(!(&half * &half).is_one());
        assert_eq!((&half * &half).to_gaussian(), Some(GaussianRational::from_ratio(1, 2)));
        assert_eq!(half.square(), GaussianRational::from_ratio(1, 2));
        assert!((&half * &half.inv().unwrap()).is_one());
        assert!(Radical::sqrt(BigRational::zero()).is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial(25).to_string(), "15511210043330985984000000");
    }

    #[test]
    fn radicals_compare_by_value() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let a = Radical::new(GaussianRational::from_ratio(1, 2), q(2, 1)).unwrap();
        let b = Radical::sqrt(q(1, 2)).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.radicand(), &q(2, 1));
        assert_eq!(Radical::sqrt(q(72, 1)).unwrap().to_string(), "(6)*sqrt(2)");
        assert_ne!(a, a.mul_gaussian(&GaussianRational::from_integer(-1)));
        assert_ne!(a, Radical::sqrt(q(3, 1)).unwrap());
        assert_ne!(a, Radical::from(GaussianRational::zero()));
    }
}