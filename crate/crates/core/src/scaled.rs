//! Values carried together with an exact radical scale factor.

use crate::error::Result;
use crate::poly::ExactPoly;
use crate::scalar::{rational_sqrt, GaussianRational, Radical};

/// `scale · body`, with the scale kept symbolic so that square roots of
/// factorial ratios never have to be approximated.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaled<P> {
    pub scale: Radical,
    pub body: P,
}

impl<P> Scaled<P> {
    pub fn new(scale: Radical, body: P) -> Self {
        Scaled { scale, body }
    }

    pub fn unit(body: P) -> Self {
        Scaled { scale: Radical::one(), body }
    }

    pub fn map<Q>(self, f: impl FnOnce(P) -> Q) -> Scaled<Q> {
        Scaled { scale: self.scale, body: f(self.body) }
    }
}

impl Scaled<ExactPoly> {
    /// ⟨self, other⟩ with the radicals combined exactly.
    pub fn bargmann_inner(&self, other: &Scaled<ExactPoly>) -> Result<Radical> {
        let ip = self.body.bargmann_inner(&other.body)?;
        Ok((&self.scale.conj() * &other.scale).mul_gaussian(&ip))
    }

    /// Exact equality of `a·√r·P` and `b·√s·Q`.
    ///
    /// When `r/s` is not a rational square the two sides can only agree if
    /// both vanish, since all remaining coefficients are Gaussian rationals.
    pub fn exact_eq(&self, other: &Scaled<ExactPoly>) -> bool {
        let lhs_zero = self.scale.is_zero() || self.body.is_zero();
        let rhs_zero = other.scale.is_zero() || other.body.is_zero();
        if lhs_zero || rhs_zero {
            return lhs_zero && rhs_zero;
        }
        if self.body.n_vars() != other.body.n_vars() {
            return false;
        }
        let ratio = self.scale.radicand() / other.scale.radicand();
        let Some(root) = rational_sqrt(&ratio) else { return false };
        let lhs = self.body.scale(&self.scale.coeff().scale_real(&root));
        let rhs = other.body.scale(other.scale.coeff());
        lhs == rhs
    }

    /// Folds the scale into the coefficients when it is rational.
    pub fn to_exact(&self) -> Option<ExactPoly> {
        let k: GaussianRational = self.scale.to_gaussian()?;
        Some(self.body.scale(&k))
    }
}
