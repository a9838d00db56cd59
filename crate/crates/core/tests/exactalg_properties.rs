mod common;

use common::{small_poly, small_rational, unit_series, XYC};
use marginal_spectra::exactalg::{exact_divide, int, resultant, MultiPoly, TruncatedSeries, Var};
use marginal_spectra::Error;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MultiPoly::one(), a.clone());
        prop_assert_eq!(&a + &MultiPoly::zero(), a);
    }

    #[test]
    fn exact_division_round_trip(a in small_poly(), b in small_poly()) {
        prop_assume!(!b.is_zero());
        for v in XYC {
            prop_assert_eq!(exact_divide(&(&a * &b), &b, *v).unwrap(), a.clone());
        }
    }

    #[test]
    fn inexact_division_is_reported(a in small_poly()) {
        prop_assume!(!a.is_zero());
        let den: MultiPoly = "x + 2".parse().unwrap();
        let num = &(&a * &den) + &MultiPoly::one();
        let err = exact_divide(&num, &den, Var::X);
        prop_assert!(matches!(err, Err(Error::NonZeroRemainder { .. })), "{:?}", err);
    }

    #[test]
    fn resultant_symmetry(a in small_poly(), b in small_poly(), i in 1u16..4, j in 1u16..4) {
        let p = &a + &MultiPoly::var_pow(Var::X, a.degree(Var::X) + i);
        let q = &b - &MultiPoly::var_pow(Var::X, b.degree(Var::X) + j);
        let pq = resultant(&p, &q, Var::X).unwrap();
        let qp = resultant(&q, &p, Var::X).unwrap();
        let sign = if (p.degree(Var::X) * q.degree(Var::X)).is_multiple_of(2) { 1 } else { -1 };
        prop_assert_eq!(pq, qp.scale(&int(sign)));
    }

    #[test]
    fn resultant_vanishes_on_common_root(
        a in small_poly(),
        b in small_poly(),
        r in small_rational(),
    ) {
        let linear = &MultiPoly::var(Var::X) - &MultiPoly::constant(r.clone());
        let p = &linear * &(&a + &MultiPoly::one());
        let q = &linear * &(&b + &MultiPoly::var(Var::X));
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert!(resultant(&p, &q, Var::X).unwrap().is_zero());
        // distinct roots give a non-zero resultant
        let shifted = &MultiPoly::var(Var::X) - &MultiPoly::constant(r + int(1));
        let rs = resultant(&linear, &shifted, Var::X).unwrap();
        prop_assert!(!rs.is_zero());
    }

    #[test]
    fn geometric_inverse_round_trip(s in unit_series()) {
        let inv = s.geometric_inverse().unwrap();
        prop_assert_eq!(s.mul(&inv).unwrap(), TruncatedSeries::one(s.order()));
        prop_assert_eq!(inv.geometric_inverse().unwrap(), s);
    }
}

#[test]
fn inverse_requires_unit_constant_term() {
    let s = TruncatedSeries::from_coeffs(2, vec![MultiPoly::from_int(2), MultiPoly::one()]);
    assert!(matches!(s.geometric_inverse(), Err(Error::NonUnitConstantTerm)));
}
