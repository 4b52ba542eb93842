//! Fractions of Puiseux polynomials.
//!
//! Fractions are kept unreduced; equality is decided by cross-multiplication.
//! Two cheap normalizations keep sizes bounded in practice: a denominator that
//! is a single monomial is folded into the numerator (monomials invert
//! exactly), and a common monomial content is cancelled.

use super::gauss::Rat;
use super::poly::{Exps, PuiseuxPoly};
use super::scalar::Scalar;
use crate::error::CoeffError;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarField {
    num: PuiseuxPoly,
    den: PuiseuxPoly,
}

impl ScalarField {
    pub fn from_poly(num: PuiseuxPoly) -> Self {
        ScalarField { num, den: PuiseuxPoly::one() }
    }

    pub fn ratio(num: PuiseuxPoly, den: PuiseuxPoly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::ZeroDivision);
        }
        let mut f = ScalarField { num, den };
        f.normalize();
        Ok(f)
    }

    pub fn zero() -> Self {
        Self::from_poly(PuiseuxPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(PuiseuxPoly::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(PuiseuxPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(PuiseuxPoly::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::constant(Scalar::from_rat(r))
    }

    pub fn var(index: usize) -> Self {
        Self::from_poly(PuiseuxPoly::var(index))
    }

    /// `(q * u_index)^e` as an exact field element.
    pub fn scaled_var_pow(q: &Rat, index: usize, e: &Rat) -> Result<Self, CoeffError> {
        Ok(Self::from_poly(PuiseuxPoly::scaled_var_pow(q, index, e)?))
    }

    pub fn numerator(&self) -> &PuiseuxPoly {
        &self.num
    }

    pub fn denominator(&self) -> &PuiseuxPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Monomial denominators fold into the numerator; common monomial content
    /// cancels.  Keeps the invariant `den != 0` and never changes the value.
    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = PuiseuxPoly::one();
            return;
        }
        if let Some((e, c)) = self.den.as_monomial() {
            let (e, c) = (e.clone(), c.clone());
            if let Ok(n) = self.num.div_monomial(&e, &c) {
                self.num = n;
                self.den = PuiseuxPoly::one();
                return;
            }
        }
        let cd = self.den.content_monomial();
        if !cd.is_one() {
            let one = Scalar::one();
            if let (Ok(n), Ok(d)) =
                (self.num.div_monomial(&cd, &one), self.den.div_monomial(&cd, &one))
            {
                self.num = n;
                self.den = d;
            }
        }
        if self.num == self.den {
            self.num = PuiseuxPoly::one();
            self.den = PuiseuxPoly::one();
        }
    }

    pub fn add(&self, rhs: &ScalarField) -> ScalarField {
        let mut out = if self.den == rhs.den {
            ScalarField { num: self.num.add(&rhs.num), den: self.den.clone() }
        } else {
            ScalarField {
                num: self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
                den: self.den.mul(&rhs.den),
            }
        };
        out.normalize();
        out
    }

    pub fn neg(&self) -> ScalarField {
        ScalarField { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, rhs: &ScalarField) -> ScalarField {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &ScalarField) -> ScalarField {
        let mut out =
            ScalarField { num: self.num.mul(&rhs.num), den: self.den.mul(&rhs.den) };
        out.normalize();
        out
    }

    pub fn mul_scalar(&self, c: &Scalar) -> ScalarField {
        ScalarField { num: self.num.mul_scalar(c), den: self.den.clone() }
    }

    pub fn scale(&self, r: &Rat) -> ScalarField {
        self.mul_scalar(&Scalar::from_rat(r.clone()))
    }

    /// Swaps numerator and denominator.
    pub fn inv(&self) -> Result<ScalarField, CoeffError> {
        if self.num.is_zero() {
            return Err(CoeffError::ZeroDivision);
        }
        let mut out = ScalarField { num: self.den.clone(), den: self.num.clone() };
        out.normalize();
        Ok(out)
    }

    pub fn div(&self, rhs: &ScalarField) -> Result<ScalarField, CoeffError> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Equality by cross-multiplication: `f/g = p/q` iff `f q - p g = 0`.
    pub fn equiv(&self, rhs: &ScalarField) -> bool {
        self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }

    /// Exact partial derivative by the quotient rule.
    pub fn partial(&self, index: usize) -> ScalarField {
        let dn = self.num.partial(index);
        if self.den.is_one() {
            return ScalarField::from_poly(dn);
        }
        let dd = self.den.partial(index);
        let mut out = ScalarField {
            num: dn.mul(&self.den).sub(&self.num.mul(&dd)),
            den: self.den.mul(&self.den),
        };
        out.normalize();
        out
    }

    pub fn pow_usize(&self, k: usize) -> ScalarField {
        let mut out = ScalarField::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// The value as a constant scalar, when the fraction is one.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.den.is_one() {
            return self.num.as_constant().cloned();
        }
        let (nc, dc) = (self.num.as_constant()?, self.den.as_constant()?);
        Some(nc.mul(&dc.inv().ok()?))
    }

    pub fn as_rat(&self) -> Option<Rat> {
        self.as_constant().and_then(|c| c.as_rat())
    }

    /// Field variables appearing anywhere in the fraction.
    pub fn vars(&self) -> Vec<usize> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn is_constant(&self) -> bool {
        self.vars().is_empty()
    }

    /// Affine substitution, legal only for integer-exponent fractions.
    pub fn substitute_affine(
        &self,
        images: &dyn Fn(usize) -> PuiseuxPoly,
    ) -> Result<ScalarField, CoeffError> {
        let num = self.num.substitute_affine(images)?;
        let den = self.den.substitute_affine(images)?;
        ScalarField::ratio(num, den)
    }

    /// Square root of a monomial fraction, when exactly representable.
    pub fn sqrt_monomial(&self) -> Option<ScalarField> {
        if self.is_zero() {
            return Some(ScalarField::zero());
        }
        if !self.den.is_one() {
            return None;
        }
        self.num.sqrt_monomial().map(ScalarField::from_poly)
    }

    /// Decomposes `c + sum_s q_s u^s` into affine data; `None` when the value
    /// is not an integer-coefficient-free affine function of the variables.
    pub fn as_affine(&self, n: usize) -> Option<(Scalar, Vec<Scalar>)> {
        if !self.den.is_one() {
            return None;
        }
        let mut constant = Scalar::zero();
        let mut linear = vec![Scalar::zero(); n];
        for (e, c) in self.num.terms() {
            if e.is_one() {
                constant = c.clone();
            } else if let Some(v) = e.linear_var() {
                if v > n {
                    return None;
                }
                linear[v - 1] = c.clone();
            } else {
                return None;
            }
        }
        Some((constant, linear))
    }
}

impl fmt::Display for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::render::sf_text(self, "u"))
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::gauss::rat;
    use super::*;

    fn u(i: usize) -> ScalarField {
        ScalarField::var(i)
    }

    fn two_u1_pow(n: i64, d: i64) -> ScalarField {
        ScalarField::scaled_var_pow(&rat(2, 1), 1, &rat(n, d)).unwrap()
    }

    #[test]
    fn zero_plus_f_is_f() {
        let f = two_u1_pow(1, 2);
        assert!(ScalarField::zero().add(&f).equiv(&f));
    }

    #[test]
    fn like_terms_merge() {
        // (2u1)^(1/2) + (2u1)^(1/2) = 2 (2u1)^(1/2)
        let s = two_u1_pow(1, 2);
        assert!(s.add(&s).equiv(&s.scale(&rat(2, 1))));
    }

    #[test]
    fn cross_multiplication_sum() {
        // 1/u1 + 1/u2 = (u1+u2)/(u1 u2)
        let lhs = u(1).inv().unwrap().add(&u(2).inv().unwrap());
        let rhs = ScalarField::ratio(
            PuiseuxPoly::var(1).add(&PuiseuxPoly::var(2)),
            PuiseuxPoly::var(1).mul(&PuiseuxPoly::var(2)),
        )
        .unwrap();
        assert!(lhs.equiv(&rhs));
    }

    #[test]
    fn one_times_f_is_f() {
        let f = ScalarField::ratio(
            PuiseuxPoly::one().add(&PuiseuxPoly::var(1)),
            PuiseuxPoly::var(2),
        )
        .unwrap();
        assert!(ScalarField::one().mul(&f).equiv(&f));
    }

    #[test]
    fn sqrt_product_collapses() {
        // (2u1)^(1/2) * (2u1)^(1/2) = 2 u1
        let s = two_u1_pow(1, 2);
        assert!(s.mul(&s).equiv(&u(1).scale(&rat(2, 1))));
    }

    #[test]
    fn monomial_times_other_var() {
        // (2u1)^(-1/2) * u2 stays a single monomial
        let p = two_u1_pow(-1, 2).mul(&u(2));
        assert_eq!(p.numerator().num_terms(), 1);
        assert!(p.denominator().is_one());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = ScalarField::one().add(&u(1));
        let g = f.inv().unwrap();
        assert!(f.mul(&g).is_one());
        assert!(ScalarField::zero().inv().is_err());
        assert!(ScalarField::one().inv().unwrap().is_one());
        // inv of a monomial folds to a negative exponent
        let m = two_u1_pow(1, 2).inv().unwrap();
        assert!(m.equiv(&two_u1_pow(-1, 2)));
    }

    #[test]
    fn partial_quotient_rule() {
        // d/du1 (u2 / (2u1)^(1/2)) = -u2 (2u1)^(-3/2)
        let f = u(2).mul(&two_u1_pow(-1, 2));
        let expect = u(2).neg().mul(&two_u1_pow(-3, 2));
        assert!(f.partial(1).equiv(&expect));
    }

    #[test]
    fn partial_of_true_fraction() {
        // d/du1 (1/(1+u1)) = -1/(1+u1)^2
        let den = PuiseuxPoly::one().add(&PuiseuxPoly::var(1));
        let f = ScalarField::ratio(PuiseuxPoly::one(), den.clone()).unwrap();
        let expect = ScalarField::ratio(PuiseuxPoly::from_int(-1), den.mul(&den)).unwrap();
        assert!(f.partial(1).equiv(&expect));
    }

    #[test]
    fn affine_readoff() {
        // 3 + 2 u2 over n = 2
        let f = ScalarField::from_int(3).add(&u(2).scale(&rat(2, 1)));
        let (c, lin) = f.as_affine(2).unwrap();
        assert_eq!(c, Scalar::from_int(3));
        assert_eq!(lin[0], Scalar::zero());
        assert_eq!(lin[1], Scalar::from_int(2));
        assert!(two_u1_pow(1, 2).as_affine(2).is_none());
    }
}
