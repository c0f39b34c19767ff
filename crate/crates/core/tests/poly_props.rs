mod common;

use newton_resolve::poly::{Polynomial, ResiduePoint, TruncatedSeries};
use newton_resolve::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn arb_poly(n: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-6i64..=6, prop::collection::vec(0..=max_exp, n)), 0..6).prop_map(move |ts| {
        Polynomial::from_terms(n, ts.into_iter().map(|(c, e)| (e, Q::from_integer(c.into())))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributive(f in arb_poly(3, 3), g in arb_poly(3, 3), h in arb_poly(3, 3)) {
        prop_assert_eq!(f.add(&g).mul(&h), f.mul(&h).add(&g.mul(&h)));
    }

    #[test]
    fn leibniz(f in arb_poly(2, 4), g in arb_poly(2, 4), var in 0usize..2) {
        let lhs = f.mul(&g).derivative(var).unwrap();
        let rhs = f.derivative(var).unwrap().mul(&g).add(&f.mul(&g.derivative(var).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_mod_matches_integer_evaluation(f in arb_poly(2, 4), x in prop::collection::vec(0u64..27, 2), p in prop::sample::select(vec![2u64, 3]), l in 1u32..4) {
        let m = p.pow(l);
        let x: Vec<u64> = x.into_iter().map(|v| v % m).collect();
        let exact = f.eval_exact(&x.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect::<Vec<_>>());
        let want = exact.numer().mod_floor(&BigInt::from(m));
        let got = f.eval_mod(&ResiduePoint::new(x, p, l).unwrap()).unwrap();
        prop_assert_eq!(BigInt::from(got), want);
    }

    #[test]
    fn monomial_pullback_is_a_ring_map(f in arb_poly(2, 3), g in arb_poly(2, 3), m in prop::collection::vec(prop::collection::vec(0u32..3, 2), 2)) {
        let pb = |p: &Polynomial| p.compose_monomial(&m).unwrap();
        prop_assert_eq!(pb(&f.mul(&g)), pb(&f).mul(&pb(&g)));
        prop_assert_eq!(pb(&f.add(&g)), pb(&f).add(&pb(&g)));
        // against the hand expansion
        let mi: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        prop_assert_eq!(common::to_map(&pb(&f)), common::pullback_by_hand(&f, &mi));
    }

    #[test]
    fn quasitranslation_round_trip(f in arb_poly(3, 3), g in arb_poly(2, 2), axis in 0usize..3, order in 3u64..8) {
        let g = g.sub(&Polynomial::constant(2, g.constant_term()));
        let fs = TruncatedSeries::new(&f, order);
        let there = fs.compose_quasitranslation(axis, &TruncatedSeries::new(&g, order)).unwrap();
        let back = there.compose_quasitranslation(axis, &TruncatedSeries::new(&g.neg(), order)).unwrap();
        prop_assert_eq!(back.poly(), &f.truncate(order));
    }
}
