use proptest::prelude::*;

use qstab_core::chain::{
    all_string_probabilities, binary_entropy, evolve, sparsity_probability_enumerated,
    sparsity_probability_exact, stationary_distribution, string_probability, ChainParams,
    DistributionVector, SymbolString, WindowConstraint,
};

fn chain() -> impl Strategy<Value = ChainParams> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64)
        .prop_map(|(e, d, p0)| ChainParams::new(e, d, p0).unwrap())
}

fn live_chain() -> impl Strategy<Value = ChainParams> {
    chain().prop_filter("needs a stationary law", |c| c.epsilon() + c.delta() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn string_law_is_normalized(c in chain(), n in 1usize..=12) {
        let probs = all_string_probabilities(&c, n).unwrap();
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        prop_assert!(probs.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn table_matches_single_string(c in chain(), n in 1usize..=12, raw in any::<u64>()) {
        let idx = raw % (1u64 << n);
        let s = SymbolString::from_index(idx, n).unwrap();
        let table = all_string_probabilities(&c, n).unwrap();
        prop_assert_eq!(table[idx as usize], string_probability(&c, &s));
    }

    #[test]
    fn dropping_last_symbol_marginalizes(c in chain(), n in 2usize..=10) {
        let long = all_string_probabilities(&c, n).unwrap();
        let short = all_string_probabilities(&c, n - 1).unwrap();
        for (i, &p) in short.iter().enumerate() {
            prop_assert!((long[2 * i] + long[2 * i + 1] - p).abs() <= 1e-12);
        }
    }

    #[test]
    fn evolve_matches_symbol_marginal(c in chain(), n in 1usize..=10) {
        let probs = all_string_probabilities(&c, n).unwrap();
        for k in 0..n {
            // Symbol k is Err when bit (n - 1 - k) of the index is set.
            let p_err: f64 = probs
                .iter()
                .enumerate()
                .filter(|(idx, _)| (idx >> (n - 1 - k)) & 1 == 1)
                .map(|(_, p)| p)
                .sum();
            let mu = evolve(DistributionVector::initial(&c), &c, k);
            prop_assert!((mu.p_err() - p_err).abs() <= 1e-10);
        }
    }

    #[test]
    fn stationary_is_fixed(c in live_chain()) {
        let st = stationary_distribution(&c).unwrap();
        let next = evolve(st, &c, 1);
        prop_assert!((next.p_good() - st.p_good()).abs() <= 1e-12);
        prop_assert!((next.p_err() - st.p_err()).abs() <= 1e-12);
    }

    #[test]
    fn window_dp_matches_enumeration(c in chain(), n in 1usize..=16, which in 0usize..4) {
        let (k, l) = [(2, 1), (3, 1), (3, 2), (4, 1)][which];
        let w = WindowConstraint::new(k, l).unwrap();
        let dp = sparsity_probability_exact(&c, n, &w).unwrap();
        let brute = sparsity_probability_enumerated(&c, n, &w).unwrap();
        prop_assert!((dp - brute).abs() <= 1e-12, "{} vs {}", dp, brute);
    }

    #[test]
    fn entropy_is_symmetric(p in 0.0..=1.0f64) {
        prop_assert!((binary_entropy(p) - binary_entropy(1.0 - p)).abs() <= 1e-12);
    }
}

#[test]
fn window_probability_monotone_in_k_and_l() {
    let grid = [0.0, 0.15, 0.4, 0.7, 1.0];
    for &e in &grid {
        for &d in &grid {
            for &p0 in &[0.0, 0.5, 1.0] {
                let c = ChainParams::new(e, d, p0).unwrap();
                for n in [1, 5, 12, 20] {
                    let s = |k, l| {
                        sparsity_probability_exact(&c, n, &WindowConstraint::new(k, l).unwrap())
                            .unwrap()
                    };
                    for l in 0..=3 {
                        for k in (l + 1)..8 {
                            assert!(
                                s(k + 1, l) <= s(k, l) + 1e-12,
                                "k: e={e} d={d} p0={p0} n={n} k={k} l={l}"
                            );
                        }
                    }
                    for k in 1..8 {
                        for l in 0..k {
                            assert!(
                                s(k, l + 1) + 1e-12 >= s(k, l),
                                "l: e={e} d={d} p0={p0} n={n} k={k} l={l}"
                            );
                        }
                    }
                }
            }
        }
    }
}
