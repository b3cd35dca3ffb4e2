use num_bigint::BigInt;
use proptest::prelude::*;
use toric_bundle::{CoeffElem, Mode, XMonomial, XPolynomial};

const N: usize = 2;
const D: usize = 3;

fn coeff(mode: Mode) -> impl Strategy<Value = CoeffElem> {
    let lo = if mode == Mode::Additive { 0 } else { -2 };
    prop::collection::vec((prop::collection::vec(lo..3i64, N), -4i64..5), 0..4).prop_map(move |terms| {
        let mut c = CoeffElem::zero(mode, N);
        for (e, k) in terms {
            c = &c + &CoeffElem::monomial(mode, e, k).unwrap();
        }
        c
    })
}

fn xpoly(mode: Mode) -> impl Strategy<Value = XPolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, D), coeff(mode)), 0..4).prop_map(move |terms| {
        let mut p = XPolynomial::zero(mode, D, N);
        for (e, c) in terms {
            p = &p + &XPolynomial::term(XMonomial(e), c);
        }
        p
    })
}

fn any_mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Additive), Just(Mode::Multiplicative)]
}

fn coeff_triple() -> impl Strategy<Value = (CoeffElem, CoeffElem, CoeffElem)> {
    any_mode().prop_flat_map(|m| (coeff(m), coeff(m), coeff(m)))
}

fn xpoly_triple() -> impl Strategy<Value = (XPolynomial, XPolynomial, XPolynomial)> {
    any_mode().prop_flat_map(|m| (xpoly(m), xpoly(m), xpoly(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coefficient_ring_laws((a, b, c) in coeff_triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &CoeffElem::one(a.mode(), N), a.clone());
    }

    #[test]
    fn polynomial_ring_laws((p, q, s) in xpoly_triple()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn additive_grading_is_multiplicative(p in xpoly(Mode::Additive), q in xpoly(Mode::Additive)) {
        for (dp, pp) in p.graded_parts() {
            for (dq, qq) in q.graded_parts() {
                let prod = &pp * &qq;
                prop_assert!(prod.is_zero() || prod.homogeneous_degree() == Some(dp + dq));
            }
        }
    }

    #[test]
    fn json_round_trip(mode in any_mode(), seed in any::<u64>()) {
        let p = {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let fan = toric_bundle::catalog::fan("p2").unwrap();
            toric_bundle::reducer::random_polynomial(&mut rng, &fan, mode, 3, 2, 4)
        };
        let back = XPolynomial::from_json(&p.to_json(), mode, D, N).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn laurent_monomials_are_units(e in prop::collection::vec(-3i64..4, N), sign in prop_oneof![Just(1i64), Just(-1i64)]) {
        let c = CoeffElem::monomial(Mode::Multiplicative, e, sign).unwrap();
        prop_assert!((&c * &c.inverse().unwrap()).is_one());
    }
}

#[test]
fn additive_mode_rejects_negative_exponents() {
    assert!(CoeffElem::monomial(Mode::Additive, vec![-1, 0], 1).is_err());
    let a = CoeffElem::var(Mode::Additive, N, 0);
    let m = CoeffElem::var(Mode::Multiplicative, N, 0);
    assert!(a.checked_add(&m).is_err());
    assert_eq!(CoeffElem::r_u_additive(&[BigInt::from(2), BigInt::from(-1)]).to_string(), "2*r1 - r2");
}
