//! Property tests for the fuzzy-norm identities, branch index algebra,
//! transform linearity and detector structure.

use proptest::prelude::*;

use ifns_core::diagnostics::{slow_osc_falsify, DensityProfile};
use ifns_core::rng::SplitMix64;
use ifns_core::{
    cesaro, holder, iterated_log, log_mean, standard_mu, standard_nu, Element, Sequence,
};

fn arb_element() -> impl Strategy<Value = Element> {
    prop_oneof![
        (-1e6_f64..1e6).prop_map(Element::Scalar),
        proptest::collection::vec(-1e3_f64..1e3, 2..40).prop_map(Element::Grid),
    ]
}

proptest! {
    #[test]
    fn membership_and_nonmembership_sum_to_one(u in arb_element(), t in 1e-9_f64..1e9) {
        let s = standard_mu(&u, t) + standard_nu(&u, t);
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_moves_the_scale(u in arb_element(), t in 1e-6_f64..1e6, c in prop_oneof![0.001_f64..1000.0, -1000.0_f64..-0.001]) {
        let lhs = standard_mu(&u.scale(c), t);
        let rhs = standard_mu(&u, t / c.abs());
        prop_assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        let lhs = standard_nu(&u.scale(c), t);
        let rhs = standard_nu(&u, t / c.abs());
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn min_triangle_inequality(a in -1e3_f64..1e3, b in -1e3_f64..1e3, t in 1e-3_f64..1e3, s in 1e-3_f64..1e3) {
        let u = Element::Scalar(a);
        let w = Element::Scalar(b);
        let sum = u.add(&w).unwrap();
        prop_assert!(standard_mu(&sum, t + s) >= standard_mu(&u, t).min(standard_mu(&w, s)) - 1e-12);
        prop_assert!(standard_nu(&u, t).max(standard_nu(&w, s)) >= standard_nu(&sum, t + s) - 1e-12);
    }

    #[test]
    fn membership_is_monotone_in_the_scale(u in arb_element(), t1 in 1e-6_f64..1e6, factor in 1.0_f64..1e3) {
        let t2 = t1 * factor;
        prop_assert!(standard_mu(&u, t1) <= standard_mu(&u, t2) + 1e-15);
        prop_assert!(standard_nu(&u, t1) >= standard_nu(&u, t2) - 1e-15);
    }

    #[test]
    fn square_branch_classes_are_disjoint(n in 2u64..30_000, m in 2u64..30_000, i in 0u64..4, j in 0u64..4) {
        // n^2 + i = m^2 + j with offsets below 4 forces (n, i) = (m, j)
        // once n, m >= 2: consecutive squares differ by at least 5
        if (n, i) != (m, j) {
            prop_assert_ne!(n * n + i, m * m + j);
        }
    }

    #[test]
    fn transforms_are_linear(seed1 in 0u64..1000, seed2 in 0u64..1000, alpha in -5.0_f64..5.0, beta in -5.0_f64..5.0) {
        let u = Sequence::scalar_fn("u", move |k| SplitMix64::new(seed1 ^ (k * 31)).range_f64(-1.0, 1.0));
        let v = Sequence::scalar_fn("v", move |k| SplitMix64::new(seed2 ^ (k * 37)).range_f64(-1.0, 1.0));
        let combo = Sequence::affine(alpha, &u, beta, &v).unwrap();
        let n = 128u64;
        let cases: Vec<(ifns_core::TransformTable, ifns_core::TransformTable, ifns_core::TransformTable)> = vec![
            (cesaro(&combo, n).unwrap(), cesaro(&u, n).unwrap(), cesaro(&v, n).unwrap()),
            (holder(&combo, 2, n).unwrap(), holder(&u, 2, n).unwrap(), holder(&v, 2, n).unwrap()),
            (log_mean(&combo, n).unwrap(), log_mean(&u, n).unwrap(), log_mean(&v, n).unwrap()),
            (iterated_log(&combo, 2, n).unwrap(), iterated_log(&u, 2, n).unwrap(), iterated_log(&v, 2, n).unwrap()),
        ];
        for (tc, tu, tv) in &cases {
            for k in 1..=n {
                let lhs = match tc.value(k) { Element::Scalar(x) => *x, _ => unreachable!() };
                let rhs = alpha * match tu.value(k) { Element::Scalar(x) => *x, _ => unreachable!() }
                    + beta * match tv.value(k) { Element::Scalar(x) => *x, _ => unreachable!() };
                prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs().max(rhs.abs())));
            }
        }
    }

    #[test]
    fn shrinking_lambda_preserves_support(lambda_hi in 1.3_f64..2.0, shrink in 0.1_f64..0.99, m0 in 1u64..8) {
        // the pair set of a smaller lambda is a subset, so a supported
        // scan stays supported
        let lambda_lo = 1.0 + (lambda_hi - 1.0) * shrink;
        let seq = Sequence::harmonic_partial_sums();
        let hi = slow_osc_falsify(&seq, 1.0, 0.5, lambda_hi, m0, 300, 10_000_000).unwrap();
        if hi.verdict.is_supported() {
            let lo = slow_osc_falsify(&seq, 1.0, 0.5, lambda_lo, m0, 300, 10_000_000).unwrap();
            prop_assert!(lo.verdict.is_supported());
        }
    }

    #[test]
    fn density_counts_are_integral_and_step_by_at_most_one(raw in proptest::collection::btree_set(1u64..500, 0..120)) {
        let bad: Vec<u64> = raw.into_iter().collect();
        let profile = DensityProfile::new(bad, 500);
        let densities = profile.densities();
        let mut prev = 0u64;
        for (i, d) in densities.iter().enumerate() {
            let j = (i + 1) as f64;
            let count = (d * j).round();
            prop_assert!((d * j - count).abs() < 1e-9, "d_j * j must be integral");
            let count = count as u64;
            prop_assert!(count == prev || count == prev + 1);
            prev = count;
        }
    }
}

#[test]
fn sequences_evaluate_concurrently() {
    let seq = Sequence::ex3(51);
    let expected = seq.term(1000);
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let s = seq.clone();
            std::thread::spawn(move || s.term(1000))
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), expected);
    }
}
