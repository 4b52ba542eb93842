//! Exact arithmetic for coefficient functions of the field variables:
//! Gaussian rationals with formal radicals, sparse Puiseux polynomials with
//! rational exponents, and unreduced fractions thereof.
//!
//! All values are immutable; operations are pure functions, so everything here
//! can be shared and sent between threads freely.

pub mod field;
pub mod gauss;
pub mod poly;
pub mod scalar;

pub use field::ScalarField;
pub use gauss::{rat, rat_int, GaussRat, Rat};
pub use poly::{Exps, PuiseuxPoly};
pub use scalar::{Radical, Scalar};

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Small random scalars: Gaussian rationals plus an occasional sqrt(2).
    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (any::<i8>(), 1u8..4, any::<i8>(), prop::bool::ANY).prop_map(|(a, d, b, rad)| {
            let g = Scalar::from_gauss(GaussRat::new(
                rat(a as i64, d as i64),
                rat(b as i64 % 3, 1),
            ));
            if rad {
                g.mul(&Scalar::sqrt_rat(&rat(2, 1)))
            } else {
                g
            }
        })
    }

    /// Random sparse Puiseux polynomials in u1, u2 with half-integer exponents.
    fn arb_poly() -> impl Strategy<Value = PuiseuxPoly> {
        prop::collection::vec(
            (arb_scalar(), -3i64..4, -3i64..4),
            0..4,
        )
        .prop_map(|terms| {
            let mut p = PuiseuxPoly::zero();
            for (c, e1, e2) in terms {
                let e = Exps::var_pow(1, rat(e1, 2)).mul(&Exps::var_pow(2, rat(e2, 1)));
                p = p.add(&PuiseuxPoly::monomial(c, e));
            }
            p
        })
    }

    fn arb_field() -> impl Strategy<Value = ScalarField> {
        (arb_poly(), arb_poly()).prop_map(|(n, d)| {
            let den = if d.is_zero() { PuiseuxPoly::one() } else { d };
            ScalarField::ratio(n, den).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(f in arb_field(), g in arb_field(), h in arb_field()) {
            // associativity and commutativity by cross-multiplication equality
            prop_assert!(f.add(&g).equiv(&g.add(&f)));
            prop_assert!(f.mul(&g).equiv(&g.mul(&f)));
            prop_assert!(f.add(&g).add(&h).equiv(&f.add(&g.add(&h))));
            prop_assert!(f.mul(&g).mul(&h).equiv(&f.mul(&g.mul(&h))));
            prop_assert!(f.mul(&g.add(&h)).equiv(&f.mul(&g).add(&f.mul(&h))));
        }

        #[test]
        fn partial_is_a_derivation(f in arb_field(), g in arb_field()) {
            let lhs = f.mul(&g).partial(1);
            let rhs = f.partial(1).mul(&g).add(&f.mul(&g.partial(1)));
            prop_assert!(lhs.equiv(&rhs));
        }

        #[test]
        fn equiv_is_an_equivalence(f in arb_field(), p in arb_poly()) {
            prop_assert!(f.equiv(&f));
            if !p.is_zero() {
                // f = (f*p)/p
                let blown = ScalarField::ratio(f.numerator().mul(&p), f.denominator().mul(&p)).unwrap();
                prop_assert!(f.equiv(&blown));
                prop_assert!(blown.equiv(&f));
            }
        }

        #[test]
        fn inverse_cancels(f in arb_field()) {
            if !f.is_zero() {
                prop_assert!(f.mul(&f.inv().unwrap()).is_one());
            }
        }
    }
}
