mod common;

use fsgame_core::game::{
    duplicator_bisim_strategy, exhaustive_playout, extract_formula, find_bisimilar_pair, solve, strategy_from_formula,
    wins_every_playout, GamePosition, Verdict,
};
use fsgame_core::logic::{enumerate_ml, ml_sizes, separates, FormulaEnumeration};
use fsgame_core::ModelSet;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

use common::{random_model, random_point, random_position, signature, unravel, MaskOracle};

fn enumerations() -> &'static [FormulaEnumeration] {
    static E: OnceLock<Vec<FormulaEnumeration>> = OnceLock::new();
    E.get_or_init(|| (0..=2).map(|n| enumerate_ml(3, 2, &signature(n))).collect())
}

fn position(seed: u64, m: u32, k: u32) -> GamePosition {
    random_position(&mut ChaCha8Rng::seed_from_u64(seed), m, k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_agrees_with_enumeration(seed in any::<u64>(), m in 0u32..=3, k in 0u32..=2) {
        let pos = position(seed, m, k);
        let e = &enumerations()[pos.signature().unwrap().len()];
        let oracle = MaskOracle::new(e, &pos);
        prop_assert_eq!(solve(&pos).unwrap().spoiler_wins(), oracle.separable(e, &pos, m, k));
    }

    #[test]
    fn extracted_formulas_separate_within_budget(seed in any::<u64>(), m in 0u32..=3, k in 0u32..=2) {
        let pos = position(seed, m, k);
        if let Verdict::SpoilerWins(s) = solve(&pos).unwrap() {
            prop_assert!(s.check().is_ok());
            let f = extract_formula(&s).unwrap();
            let sz = ml_sizes(&f);
            prop_assert!(sz.ms <= m && sz.cs <= k);
            prop_assert!(separates(&f, &pos.left, &pos.right).unwrap());
        }
    }

    #[test]
    fn wins_survive_larger_budgets(seed in any::<u64>(), m in 0u32..=2, k in 0u32..=1) {
        let pos = position(seed, m, k);
        if let Verdict::SpoilerWins(s) = solve(&pos).unwrap() {
            let f = extract_formula(&s).unwrap();
            for (m2, k2) in [(m + 1, k), (m, k + 1)] {
                let bigger = GamePosition::new(m2, k2, pos.left.clone(), pos.right.clone());
                prop_assert!(solve(&bigger).unwrap().spoiler_wins());
                let sz = ml_sizes(&f);
                prop_assert!(sz.ms <= m2 && sz.cs <= k2 && separates(&f, &bigger.left, &bigger.right).unwrap());
            }
        }
    }

    #[test]
    fn formula_strategy_round_trip(seed in any::<u64>(), m in 1u32..=3, k in 0u32..=2) {
        let pos = position(seed, m, k);
        if let Verdict::SpoilerWins(s) = solve(&pos).unwrap() {
            let f = extract_formula(&s).unwrap();
            let back = strategy_from_formula(&f, &pos.left, &pos.right).unwrap();
            prop_assert!(wins_every_playout(&back));
            let g = extract_formula(&back).unwrap();
            let (a, b) = (ml_sizes(&f), ml_sizes(&g));
            prop_assert!(b.ms <= a.ms && b.cs <= a.cs);
            prop_assert!(separates(&g, &pos.left, &pos.right).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bisimulation_strategy_never_loses(seed in any::<u64>(), m in 0u32..=2, k in 0u32..=1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let props = signature(rng.gen_range(0..=1));
        let base = random_model(&mut rng, 3, &props, 0.4);
        let p = random_point(&mut rng, &base);
        let q = unravel(&p, m);
        let mut left: ModelSet = [p].into_iter().collect();
        let mut right: ModelSet = [q].into_iter().collect();
        if rng.gen_bool(0.5) {
            let extra = random_model(&mut rng, 3, &props, 0.4);
            left.insert(random_point(&mut rng, &extra));
        }
        if rng.gen_bool(0.5) {
            let extra = random_model(&mut rng, 3, &props, 0.4);
            right.insert(random_point(&mut rng, &extra));
        }
        let pos = GamePosition::new(m, k, left, right);
        let witness = find_bisimilar_pair(&pos).unwrap().expect("planted pair");
        let r = duplicator_bisim_strategy(&pos, witness).unwrap();
        let report = exhaustive_playout(&pos, r).unwrap();
        prop_assert!(report.duplicator_survives(), "S reached {:?}", report.s_win);
        prop_assert!(!solve(&pos).unwrap().spoiler_wins());
    }
}
