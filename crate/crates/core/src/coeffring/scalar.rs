//! Exact scalars: Gaussian-rational combinations of formal radicals.
//!
//! A [`Radical`] is a monomial `p1^{e1} * p2^{e2} * ...` over prime bases with
//! fractional exponents in `(0, 1)`.  Multiplication rewrites exactly: exponents
//! add, integer parts carry into the rational coefficient (`sqrt(2)*sqrt(2) -> 2`).
//! A [`Scalar`] is a finite sum of radicals with [`GaussRat`] coefficients; this
//! is the coefficient ring of the whole engine.  Inversion and square roots are
//! supported on the subsets the constructions actually produce, and fail loudly
//! otherwise.

use super::gauss::{GaussRat, Rat};
use crate::error::CoeffError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Product of prime powers with exponents in the open interval `(0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Radical(BTreeMap<u64, Rat>);

impl Radical {
    pub fn one() -> Self {
        Radical(BTreeMap::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&u64, &Rat)> {
        self.0.iter()
    }

    /// Inserts `p^e`, reducing `e` mod 1; returns the rational carry `p^floor(e)`.
    fn push(&mut self, p: u64, e: &Rat) -> Rat {
        let floor = e.floor();
        let frac = e - &floor;
        if !frac.is_zero() {
            let cur = self.0.entry(p).or_insert_with(Rat::zero);
            *cur += frac;
            // The stored exponent may itself reach 1 after accumulation.
            let f2 = cur.floor();
            if !f2.is_zero() {
                *cur -= &f2;
                if cur.is_zero() {
                    self.0.remove(&p);
                }
                return pow_rat_int(p, &(floor + f2));
            }
            if self.0.get(&p).map(|v| v.is_zero()).unwrap_or(false) {
                self.0.remove(&p);
            }
        }
        pow_rat_int(p, &floor)
    }

    /// Product of two radicals plus the rational carry factor.
    fn mul(&self, other: &Radical) -> (Radical, Rat) {
        let mut out = self.clone();
        let mut carry = Rat::one();
        for (p, e) in other.0.iter() {
            carry *= out.push(*p, e);
        }
        (out, carry)
    }

    /// Largest denominator among the exponents (1 when empty).
    fn max_exp_den(&self) -> BigInt {
        self.0
            .values()
            .map(|e| e.denom().clone())
            .fold(BigInt::one(), |a, b| a.lcm(&b))
    }
}

/// `p^k` for integer `k` (as exact rational; `k` may be negative).
fn pow_rat_int(p: u64, k: &Rat) -> Rat {
    debug_assert!(k.denom().is_one());
    let k = k.numer();
    let mag = k.magnitude().to_u32().expect("radical carry exponent too large");
    let pk = Rat::from_integer(BigInt::from(p).pow(mag));
    if k.is_negative() {
        pk.recip()
    } else {
        pk
    }
}

/// Trial-division factorization. Inputs come from user-entered rationals, so a
/// hard bound keeps the engine responsive; beyond it we refuse the radical.
fn factor_u64(mut n: u64) -> Result<Vec<(u64, u32)>, CoeffError> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut m = 0;
            while n % d == 0 {
                n /= d;
                m += 1;
            }
            out.push((d, m));
        }
        d += 1;
        if d > 1 << 21 {
            return Err(CoeffError::UnsupportedRadical(format!(
                "cannot factor {} for exact root extraction",
                n
            )));
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Finite sum of radicals with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Radical, GaussRat>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Scalar::from_gauss(GaussRat::one())
    }

    pub fn i() -> Self {
        Scalar::from_gauss(GaussRat::i())
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !g.is_zero() {
            terms.insert(Radical::one(), g);
        }
        Scalar { terms }
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::from_gauss(GaussRat::from_rat(r))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gauss(GaussRat::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::from_gauss(GaussRat::from_ratio(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_gauss().map(|g| g.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Radical, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value as a plain Gaussian rational, when no radical is present.
    pub fn as_gauss(&self) -> Option<&GaussRat> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (r, g) = self.terms.iter().next().unwrap();
                if r.is_one() {
                    Some(g)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The value as a plain rational, when it is one.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        self.as_gauss().and_then(|g| if g.is_rational() { Some(g.re.clone()) } else { None })
    }

    pub fn is_gauss(&self) -> bool {
        self.is_zero() || self.as_gauss().is_some()
    }

    fn insert(&mut self, r: Radical, g: GaussRat) {
        if g.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(r) {
            Entry::Vacant(e) => {
                e.insert(g);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &g;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (r, g) in rhs.terms.iter() {
            out.insert(r.clone(), g.clone());
        }
        out
    }

    pub fn neg(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(r, g)| (r.clone(), -g)).collect() }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (r1, g1) in self.terms.iter() {
            for (r2, g2) in rhs.terms.iter() {
                let (r, carry) = r1.mul(r2);
                out.insert(r, (g1 * g2).scale(&carry));
            }
        }
        out
    }

    pub fn mul_gauss(&self, g: &GaussRat) -> Scalar {
        if g.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(r, c)| (r.clone(), c * g)).collect() }
    }

    pub fn scale(&self, r: &Rat) -> Scalar {
        self.mul_gauss(&GaussRat::from_rat(r.clone()))
    }

    /// Exact `base^expo` for rational `base`, factoring into prime radicals.
    ///
    /// Negative bases are supported for odd-denominator exponents (real odd
    /// root) and for half-integer exponents (a factor of `i` appears).
    pub fn pow_rat(base: &Rat, expo: &Rat) -> Result<Scalar, CoeffError> {
        if base.is_zero() {
            if expo.is_positive() {
                return Ok(Scalar::zero());
            }
            return Err(CoeffError::ZeroDivision);
        }
        if expo.is_zero() {
            return Ok(Scalar::one());
        }
        let mut unit = GaussRat::one();
        if base.is_negative() {
            let den = expo.denom();
            if den.is_odd() {
                // (-x)^(p/q) with q odd: sign (-1)^p.
                if expo.numer().is_odd() {
                    unit = GaussRat::from_int(-1);
                }
            } else if (den % BigInt::from(2)).is_zero() && (expo * Rat::from_integer(2.into())).denom().is_one() {
                // Half-integer exponent: (-1)^(k/2) = i^k.
                let k = (expo * Rat::from_integer(2.into())).numer().clone();
                let k4: BigInt = ((k % 4) + 4) % 4;
                unit = match k4.to_i64().unwrap() {
                    0 => GaussRat::one(),
                    1 => GaussRat::i(),
                    2 => GaussRat::from_int(-1),
                    _ => -&GaussRat::i(),
                };
            } else {
                return Err(CoeffError::UnsupportedRadical(format!(
                    "({})^({}) leaves the supported radical ring",
                    base, expo
                )));
            }
        }
        let num = base.numer().magnitude();
        let den = base.denom().magnitude();
        let to64 = |b: &num_bigint::BigUint| {
            b.to_u64().ok_or_else(|| {
                CoeffError::UnsupportedRadical(format!("base {} too large for exact root", base))
            })
        };
        let mut rad = Radical::one();
        let mut carry = Rat::one();
        for (p, m) in factor_u64(to64(num)?)? {
            carry *= rad.push(p, &(expo * Rat::from_integer(BigInt::from(m))));
        }
        for (p, m) in factor_u64(to64(den)?)? {
            carry *= rad.push(p, &(-expo * Rat::from_integer(BigInt::from(m))));
        }
        let mut out = Scalar::zero();
        out.insert(rad, unit.scale(&carry));
        Ok(out)
    }

    /// Square root of a rational, always representable (with `i` for negatives).
    pub fn sqrt_rat(r: &Rat) -> Scalar {
        Scalar::pow_rat(r, &Rat::new(BigInt::one(), BigInt::from(2)))
            .expect("rational square roots are always in the radical ring")
    }

    /// Exact square root when one exists in the ring.
    ///
    /// Supported: zero; Gaussian rationals whose modulus is a perfect rational
    /// square (this covers all plain rationals); single radical terms.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if let Some(g) = self.as_gauss() {
            if g.is_rational() {
                return Some(Scalar::sqrt_rat(&g.re));
            }
            // sqrt(a+bi) = sqrt((d+a)/2) + sign(b) sqrt((d-a)/2) i, d = |a+bi|,
            // exact only when d is rational.
            let d = rat_sqrt_exact(&g.norm_sqr())?;
            let re2 = (&d + &g.re) / Rat::from_integer(2.into());
            let im2 = (&d - &g.re) / Rat::from_integer(2.into());
            let sre = Scalar::sqrt_rat(&re2);
            let sim = Scalar::sqrt_rat(&im2);
            let sign = if g.im.is_negative() { Scalar::from_int(-1) } else { Scalar::one() };
            return Some(sre.add(&sim.mul(&sign).mul(&Scalar::i())));
        }
        if self.terms.len() == 1 {
            let (r, g) = self.terms.iter().next().unwrap();
            // sqrt(g * prod p^e) = sqrt(g) * prod p^(e/2)
            let sg = Scalar::from_gauss(g.clone()).sqrt()?;
            let mut rad = Radical::one();
            let mut carry = Rat::one();
            for (p, e) in r.entries() {
                carry *= rad.push(*p, &(e / Rat::from_integer(2.into())));
            }
            let mut half = Scalar::zero();
            half.insert(rad, GaussRat::from_rat(carry));
            return Some(sg.mul(&half));
        }
        None
    }

    /// Exact inverse.  Supports Gaussian rationals, single radical terms, and
    /// sums whose radicals are pure square roots (rationalized prime by prime).
    pub fn inv(&self) -> Result<Scalar, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::ZeroDivision);
        }
        if let Some(g) = self.as_gauss() {
            return Ok(Scalar::from_gauss(g.inv().unwrap()));
        }
        if self.terms.len() == 1 {
            let (r, g) = self.terms.iter().next().unwrap();
            let mut rad = Radical::one();
            let mut carry = Rat::one();
            for (p, e) in r.entries() {
                carry *= rad.push(*p, &(-e));
            }
            let mut out = Scalar::zero();
            out.insert(rad, g.inv().unwrap().scale(&carry));
            return Ok(out);
        }
        // Pick a prime appearing with exponent exactly 1/2 everywhere it occurs,
        // and rationalize it away.
        let p = self.square_root_prime().ok_or_else(|| {
            CoeffError::UnsupportedRadical(format!(
                "cannot invert {} exactly (non-square-root radical in a sum)",
                self
            ))
        })?;
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        // self = beta + sqrt(p) gamma with beta, gamma free of sqrt(p).
        let mut beta = Scalar::zero();
        let mut gamma = Scalar::zero();
        let sqrt_p = Scalar::pow_rat(&Rat::from_integer(BigInt::from(p)), &half)?;
        for (r, g) in self.terms.iter() {
            if r.entries().any(|(q, e)| *q == p && *e == half) {
                let mut stripped = r.clone();
                stripped.0.remove(&p);
                if r.entries().any(|(q, e)| *q == p && *e != half) {
                    return Err(CoeffError::UnsupportedRadical(format!(
                        "cannot invert {} exactly",
                        self
                    )));
                }
                gamma.insert(stripped, g.clone());
            } else {
                beta.insert(r.clone(), g.clone());
            }
        }
        // 1/(beta + sqrt(p) gamma) = (beta - sqrt(p) gamma) / (beta^2 - p gamma^2)
        let p_scalar = Scalar::from_rat(Rat::from_integer(BigInt::from(p)));
        let denom = beta.mul(&beta).sub(&p_scalar.mul(&gamma.mul(&gamma)));
        if denom.is_zero() {
            return Err(CoeffError::UnsupportedRadical(format!(
                "rationalization of {} degenerated",
                self
            )));
        }
        let denom_inv = denom.inv()?;
        Ok(beta.sub(&sqrt_p.mul(&gamma)).mul(&denom_inv))
    }

    /// Sign of a real scalar (`None` if the scalar is not real or the sign
    /// cannot be decided exactly).
    pub fn sign_real(&self) -> Option<Ordering> {
        if self.terms.values().any(|g| !g.is_rational()) {
            return None;
        }
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        if let Some(g) = self.as_gauss() {
            return Some(g.re.cmp(&Rat::zero()));
        }
        // Split on a square-root prime: self = beta + sqrt(p) gamma.
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let p = self.square_root_prime()?;
        let mut beta = Scalar::zero();
        let mut gamma = Scalar::zero();
        for (r, g) in self.terms.iter() {
            if r.entries().any(|(q, e)| *q == p && *e == half) {
                let mut stripped = r.clone();
                stripped.0.remove(&p);
                gamma.insert(stripped, g.clone());
            } else {
                beta.insert(r.clone(), g.clone());
            }
        }
        let sb = beta.sign_real()?;
        let sg = gamma.sign_real()?;
        if sg == Ordering::Equal {
            return Some(sb);
        }
        if sb == Ordering::Equal || sb == sg {
            return Some(sg);
        }
        // Opposite signs: compare beta^2 against p*gamma^2.
        let p_scalar = Scalar::from_rat(Rat::from_integer(BigInt::from(p)));
        let diff = beta.mul(&beta).sub(&p_scalar.mul(&gamma.mul(&gamma)));
        let sd = diff.sign_real()?;
        Some(match sd {
            Ordering::Equal => Ordering::Equal,
            Ordering::Greater => sb,
            Ordering::Less => sg,
        })
    }

    /// True when every radical exponent denominator divides 2 and coefficients
    /// are real; such scalars admit exact sign tests and inversion.
    pub fn is_real_quadratic(&self) -> bool {
        self.terms.iter().all(|(r, g)| {
            g.is_rational() && r.max_exp_den() <= BigInt::from(2)
        })
    }

    /// A prime that occurs somewhere with exponent 1/2 and nowhere with any
    /// other exponent, usable as a rationalization pivot.
    fn square_root_prime(&self) -> Option<u64> {
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let mut seen: BTreeMap<u64, bool> = BTreeMap::new();
        for (r, _) in self.terms.iter() {
            for (p, e) in r.entries() {
                let ok = *e == half;
                seen.entry(*p).and_modify(|v| *v &= ok).or_insert(ok);
            }
        }
        seen.into_iter().find(|(_, ok)| *ok).map(|(p, _)| p)
    }
}

/// Exact rational square root, if `r` is a perfect square.
fn rat_sqrt_exact(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, g) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if r.is_one() {
                write!(f, "{}", g)?;
            } else {
                let rad: Vec<String> = r
                    .entries()
                    .map(|(p, e)| format!("{}^({}/{})", p, e.numer(), e.denom()))
                    .collect();
                if g.is_one() {
                    write!(f, "{}", rad.join("*"))?;
                } else {
                    write!(f, "{}*{}", g, rad.join("*"))?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::super::gauss::rat;
    use super::*;

    fn sqrt2() -> Scalar {
        Scalar::sqrt_rat(&rat(2, 1))
    }

    #[test]
    fn sqrt2_squares_to_two() {
        assert_eq!(sqrt2().mul(&sqrt2()), Scalar::from_int(2));
    }

    #[test]
    fn sqrt_of_negative_gets_i() {
        let s = Scalar::sqrt_rat(&rat(-4, 1));
        assert_eq!(s.mul(&s), Scalar::from_int(-4));
        assert_eq!(s, Scalar::from_int(2).mul(&Scalar::i()));
    }

    #[test]
    fn pow_rat_rewrites_integer_parts() {
        // 8^(1/2) = 2 * 2^(1/2)
        let s = Scalar::pow_rat(&rat(8, 1), &rat(1, 2)).unwrap();
        assert_eq!(s, Scalar::from_int(2).mul(&sqrt2()));
        // (-8)^(1/3) = -2
        let c = Scalar::pow_rat(&rat(-8, 1), &rat(1, 3)).unwrap();
        assert_eq!(c, Scalar::from_int(-2));
    }

    #[test]
    fn invert_sum_of_square_roots() {
        // 1/(1 + sqrt(2)) = sqrt(2) - 1
        let s = Scalar::one().add(&sqrt2());
        let inv = s.inv().unwrap();
        assert_eq!(s.mul(&inv), Scalar::one());
        assert_eq!(inv, sqrt2().sub(&Scalar::one()));
        // A two-prime tower.
        let t = sqrt2().add(&Scalar::sqrt_rat(&rat(3, 1))).add(&Scalar::from_int(5));
        let ti = t.inv().unwrap();
        assert_eq!(t.mul(&ti), Scalar::one());
    }

    #[test]
    fn gaussian_sqrt_with_rational_modulus() {
        // sqrt(3+4i) = 2+i
        let z = Scalar::from_gauss(GaussRat::new(rat(3, 1), rat(4, 1)));
        let s = z.sqrt().unwrap();
        assert_eq!(s.mul(&s), z);
    }

    #[test]
    fn sign_of_radical_sums() {
        // 3 - 2*sqrt(2) > 0, 1 - sqrt(2) < 0
        let a = Scalar::from_int(3).sub(&Scalar::from_int(2).mul(&sqrt2()));
        assert_eq!(a.sign_real(), Some(Ordering::Greater));
        let b = Scalar::one().sub(&sqrt2());
        assert_eq!(b.sign_real(), Some(Ordering::Less));
    }
}
