//! Sparse Puiseux polynomials: finite sums of monomials `c * u1^{e1} ... un^{en}`
//! with [`Scalar`] coefficients and rational (possibly negative) exponents.

use super::gauss::Rat;
use super::scalar::Scalar;
use crate::error::CoeffError;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent map of a Puiseux monomial: field-variable index (1-based) to a
/// nonzero rational exponent.  The derived `Ord` is the canonical term order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exps(BTreeMap<usize, Rat>);

impl Exps {
    pub fn one() -> Self {
        Exps(BTreeMap::new())
    }

    pub fn var(index: usize) -> Self {
        Exps::var_pow(index, Rat::one())
    }

    pub fn var_pow(index: usize, e: Rat) -> Self {
        assert!(index >= 1, "field variables are 1-based");
        let mut m = BTreeMap::new();
        if !e.is_zero() {
            m.insert(index, e);
        }
        Exps(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&usize, &Rat)> {
        self.0.iter()
    }

    pub fn exponent(&self, index: usize) -> Rat {
        self.0.get(&index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn mul(&self, other: &Exps) -> Exps {
        let mut out = self.0.clone();
        for (v, e) in other.0.iter() {
            let cur = out.entry(*v).or_insert_with(Rat::zero);
            *cur += e;
            if cur.is_zero() {
                out.remove(v);
            }
        }
        Exps(out)
    }

    pub fn inv(&self) -> Exps {
        Exps(self.0.iter().map(|(v, e)| (*v, -e)).collect())
    }

    pub fn pow(&self, k: &Rat) -> Exps {
        if k.is_zero() {
            return Exps::one();
        }
        Exps(self.0.iter().map(|(v, e)| (*v, e * k)).collect())
    }

    /// All exponents are nonnegative integers (an ordinary polynomial monomial).
    pub fn is_polynomial(&self) -> bool {
        self.0.values().all(|e| e.denom().is_one() && !e.is_negative())
    }

    /// Total degree when polynomial and of degree <= 1 in each variable.
    pub fn linear_var(&self) -> Option<usize> {
        if self.0.len() == 1 {
            let (v, e) = self.0.iter().next().unwrap();
            if e.is_one() {
                return Some(*v);
            }
        }
        None
    }
}

/// Sparse Puiseux polynomial with a unique sorted term list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PuiseuxPoly {
    terms: BTreeMap<Exps, Scalar>,
}

impl PuiseuxPoly {
    pub fn zero() -> Self {
        PuiseuxPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        PuiseuxPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exps::one(), c);
        }
        PuiseuxPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        PuiseuxPoly::constant(Scalar::from_int(n))
    }

    pub fn var(index: usize) -> Self {
        PuiseuxPoly::monomial(Scalar::one(), Exps::var(index))
    }

    pub fn monomial(c: Scalar, e: Exps) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        PuiseuxPoly { terms }
    }

    /// `(q * u_index)^e` expanded into an exact monomial, e.g. `(2 u1)^{-3/2}`.
    pub fn scaled_var_pow(q: &Rat, index: usize, e: &Rat) -> Result<Self, CoeffError> {
        let c = Scalar::pow_rat(q, e)?;
        Ok(PuiseuxPoly::monomial(c, Exps::var_pow(index, e.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn as_constant(&self) -> Option<&Scalar> {
        match self.terms.len() {
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.is_one() {
                    Some(c)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Exps, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn insert(&mut self, e: Exps, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms.iter() {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> PuiseuxPoly {
        PuiseuxPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        let mut out = PuiseuxPoly::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in rhs.terms.iter() {
                out.insert(e1.mul(e2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &Scalar) -> PuiseuxPoly {
        if c.is_zero() {
            return PuiseuxPoly::zero();
        }
        PuiseuxPoly { terms: self.terms.iter().map(|(e, k)| (e.clone(), k.mul(c))).collect() }
    }

    pub fn pow_usize(&self, k: usize) -> PuiseuxPoly {
        let mut out = PuiseuxPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact partial derivative in the field variable `index` (power rule on
    /// rational exponents).
    pub fn partial(&self, index: usize) -> PuiseuxPoly {
        let mut out = PuiseuxPoly::zero();
        for (e, c) in self.terms.iter() {
            let k = e.exponent(index);
            if k.is_zero() {
                continue;
            }
            let mut shifted = e.clone();
            shifted = shifted.mul(&Exps::var_pow(index, -Rat::one()));
            out.insert(shifted, c.scale(&k));
        }
        out
    }

    /// Divides every term by the monomial `e` (always exact for monomials).
    pub fn div_monomial(&self, e: &Exps, c: &Scalar) -> Result<PuiseuxPoly, CoeffError> {
        let ci = c.inv()?;
        let ei = e.inv();
        let mut out = PuiseuxPoly::zero();
        for (te, tc) in self.terms.iter() {
            out.insert(te.mul(&ei), tc.mul(&ci));
        }
        Ok(out)
    }

    /// Componentwise minimum of exponents over all terms: the largest monomial
    /// dividing every term (exponent 0 for variables missing from any term).
    pub fn content_monomial(&self) -> Exps {
        let mut mins: BTreeMap<usize, Rat> = BTreeMap::new();
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (e, _) in self.terms.iter() {
            for (v, x) in e.entries() {
                counts.entry(*v).and_modify(|c| *c += 1).or_insert(1);
                mins.entry(*v)
                    .and_modify(|m| {
                        if x < m {
                            *m = x.clone();
                        }
                    })
                    .or_insert_with(|| x.clone());
            }
        }
        let n = self.terms.len();
        let mut out = BTreeMap::new();
        for (v, m) in mins {
            let everywhere = counts[&v] == n;
            // A variable missing from some term counts as exponent 0 there.
            let m = if everywhere { m } else { m.min(Rat::zero()) };
            if !m.is_zero() {
                out.insert(v, m);
            }
        }
        Exps(out)
    }

    /// Variables appearing in any term.
    pub fn vars(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|e| e.entries().map(|(v, _)| *v))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// All exponents are nonnegative integers.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.is_polynomial())
    }

    /// Substitute each variable by an affine combination of new variables.
    /// Only legal for genuine polynomials (integer exponents).
    pub fn substitute_affine(
        &self,
        images: &dyn Fn(usize) -> PuiseuxPoly,
    ) -> Result<PuiseuxPoly, CoeffError> {
        let mut out = PuiseuxPoly::zero();
        for (e, c) in self.terms.iter() {
            let mut term = PuiseuxPoly::constant(c.clone());
            for (v, x) in e.entries() {
                if !x.denom().is_one() || x.is_negative() {
                    return Err(CoeffError::UnsupportedRadical(format!(
                        "cannot substitute into non-integer exponent {}^({})",
                        v, x
                    )));
                }
                let k = x.numer().to_string().parse::<usize>().map_err(|_| {
                    CoeffError::UnsupportedRadical("exponent too large".into())
                })?;
                term = term.mul(&images(*v).pow_usize(k));
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Exact square root of a single monomial, when the coefficient has one.
    pub fn sqrt_monomial(&self) -> Option<PuiseuxPoly> {
        let (e, c) = self.as_monomial()?;
        let sc = c.sqrt()?;
        Some(PuiseuxPoly::monomial(sc, e.pow(&super::gauss::rat(1, 2))))
    }
}

impl fmt::Display for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::render::poly_text(self, "u"))
    }
}

impl fmt::Debug for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::gauss::rat;
    use super::*;

    /// `(2 u1)^{e}` as a monomial.
    fn two_u1_pow(n: i64, d: i64) -> PuiseuxPoly {
        PuiseuxPoly::scaled_var_pow(&rat(2, 1), 1, &rat(n, d)).unwrap()
    }

    #[test]
    fn sqrt_two_u_squares_back() {
        let s = two_u1_pow(1, 2);
        let p = s.mul(&s);
        // (2u)^(1/2) * (2u)^(1/2) = 2u
        let expect = PuiseuxPoly::monomial(Scalar::from_int(2), Exps::var(1));
        assert_eq!(p, expect);
    }

    #[test]
    fn partial_of_sqrt_two_u() {
        // d/du1 (2u1)^(1/2) = (2u1)^(-1/2)
        let s = two_u1_pow(1, 2);
        assert_eq!(s.partial(1), two_u1_pow(-1, 2));
    }

    #[test]
    fn partial_of_constant_is_zero() {
        assert!(PuiseuxPoly::from_int(7).partial(1).is_zero());
    }

    #[test]
    fn content_handles_missing_vars() {
        // u1^2*u2 + u1: content = u1
        let p = PuiseuxPoly::monomial(Scalar::one(), Exps::var_pow(1, rat(2, 1)).mul(&Exps::var(2)))
            .add(&PuiseuxPoly::var(1));
        let c = p.content_monomial();
        assert_eq!(c, Exps::var(1));
    }
}
