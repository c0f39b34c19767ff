mod common;

use common::*;
use newton_resolve::geometry::FieldTag;
use newton_resolve::harness::counting::{brute_count, count_series, CountConfig, Strategy as Count};
use newton_resolve::harness::expsum::exp_sum;
use newton_resolve::harness::fit::{fit_count_series, FitModel, FitTarget, Verdict};
use newton_resolve::harness::sublevel::{sublevel_volumes, Sampler};
use newton_resolve::poly::Polynomial;
use num_bigint::BigInt;
use num_traits::Pow;
use proptest::prelude::*;

fn arb_int_poly(n: usize) -> impl Strategy<Value = Vec<(i64, Vec<u32>)>> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(0u32..=3, n)), 1..5)
}

fn build(terms: &[(i64, Vec<u32>)], n: usize) -> Polynomial {
    Polynomial::from_terms(n, terms.iter().map(|(c, e)| (e.clone(), q(*c)))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn brute_hensel_and_loops_agree(terms in arb_int_poly(2), p in prop::sample::select(vec![2u64, 3, 5])) {
        let f = build(&terms, 2);
        let top = if p == 5 { 2 } else { 3 };
        let levels: Vec<u32> = (1..=top).collect();
        let cfg = CountConfig::default();
        let b = count_series(&f, p, &levels, Count::Brute, &cfg).unwrap();
        let h = count_series(&f, p, &levels, Count::Hensel, &cfg).unwrap();
        prop_assert_eq!(&b.values, &h.values);
        for (i, &l) in levels.iter().enumerate() {
            let direct = count_by_loops(&terms, 2, p as i64, l);
            prop_assert_eq!(brute_count(&f, p, l, 1 << 20).unwrap(), direct);
            // N_l p^{ln} is an integer and the series is nonincreasing
            let scaled = &b.values[i] * newton_resolve::Q::from_integer(Pow::pow(&BigInt::from(p), 2 * l));
            prop_assert!(scaled.is_integer());
            if i > 0 {
                prop_assert!(b.values[i] <= b.values[i - 1]);
            }
        }
    }

    #[test]
    fn exp_sum_bounds_and_conjugation(terms in arb_int_poly(2), l in 1u32..4) {
        let f = build(&terms, 2);
        let s = exp_sum(&f, 3, l, 1 << 20).unwrap();
        prop_assert!(s.norm() <= 1.0 + 1e-12);
        let t = exp_sum(&f.neg(), 3, l, 1 << 20).unwrap();
        prop_assert!((s.conj() - t).norm() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_monotone(terms in arb_int_poly(2), seed in 0u64..1000) {
        let f = build(&terms, 2);
        let eps = [1e-3, 1e-2, 1e-1, 0.5];
        let t = sublevel_volumes(&f, FieldTag::Real, &eps, &Sampler::MonteCarlo { samples: 20_000, seed }, 0.5).unwrap();
        for w in t.rows.windows(2) {
            prop_assert!(w[0].volume <= w[1].volume + 3.0 * (w[0].stderr + w[1].stderr));
        }
    }
}

#[test]
fn zero_polynomial_sum_is_one() {
    let z = Polynomial::zero(2);
    assert!((exp_sum(&z, 3, 2, 1 << 20).unwrap().re - 1.0).abs() < 1e-15);
}

#[test]
fn monomial_count_exponent_is_minus_one_over_d() {
    // staircase oracle: #{x : p^l | x^g} is p^{l - ceil(l/g)} per coordinate
    for g in [1u32, 2, 3, 4] {
        let f = poly(&format!("x1^{g}"), 1);
        let levels: Vec<u32> = (1..=24).collect();
        let s = count_series(&f, 2, &levels, Count::Hensel, &CountConfig::default()).unwrap();
        for (&l, v) in levels.iter().zip(&s.values) {
            let want = newton_resolve::Q::new(1.into(), Pow::pow(&BigInt::from(2), l.div_ceil(g)));
            assert_eq!(v, &want);
        }
        let fit = fit_count_series(&s, FitModel::ExponentWithLog { pinned: Some(0.0) }, 2, FitTarget::new(-1.0 / g as f64, 0.0));
        assert_eq!(fit.verdict, Verdict::Pass, "x1^{g}: {:?}", fit.fit);
    }
}

#[test]
fn case_a_battery_slopes_match_prediction() {
    use newton_resolve::geometry::{predict_growth, GrowthCase};
    use newton_resolve::rational::to_f64;
    let mut report = vec![];
    for (name, text, n) in BATTERY {
        let f = poly(text, n);
        let pred = predict_growth(&f, FieldTag::PAdic { p: 3 }).unwrap();
        if pred.case != GrowthCase::A {
            continue;
        }
        let top = 39; // 3^39 is the largest power of 3 below 2^63
        let levels: Vec<u32> = (1..=top).collect();
        let s = count_series(&f, 3, &levels, Count::Hensel, &CountConfig::default()).unwrap();
        let w = (n - pred.k - 1) as f64;
        let target = FitTarget::new(-1.0 / to_f64(&pred.d), w);
        let fit = fit_count_series(&s, FitModel::ExponentWithLog { pinned: Some(w) }, 2, target);
        report.push(format!("{name}: {:?} slope {:?} target {:.4} nodes {}", fit.verdict, fit.fit.map(|x| x.slope), target.slope, s.nodes));
    }
    println!("{}", report.join("\n"));
    assert!(report.iter().all(|r| r.contains("Pass")), "{report:#?}");
}
