mod common;

use common::{redex, rng};
use proptest::prelude::*;
use termgraph::{apply, is_circular_redex, le_bot, local_truncate, match_at, step_violations};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn steps_preserve_their_context(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, n, rule) = redex(&mut r, 6);
        prop_assert!(match_at(&rule.rule, &g, n).is_some());
        let step = apply(&g, n, &rule).unwrap();
        prop_assert!(le_bot(&step.context, &step.before));
        prop_assert!(le_bot(&step.context, &step.after));
        prop_assert_eq!(&step.context, &local_truncate(&step.before, &[step.redex]));
        prop_assert_eq!(step.after.depth(step.reduct_root) <= step.redex_depth, true);
        if !step.reduct_in_context {
            let v = step_violations(&step, 6);
            prop_assert!(v.is_empty(), "{} at {} of {}: {:?}", rule.rule, n, g, v);
            prop_assert_eq!(step.after.depth(step.reduct_root), step.redex_depth);
        }
    }

    #[test]
    fn shallow_positions_survive_deep_steps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, n, rule) = redex(&mut r, 6);
        let step = apply(&g, n, &rule).unwrap();
        let shape = |d: usize, x: &termgraph::TermGraph| x.positions_up_to(d).into_iter().map(|(p, _)| p).collect::<Vec<_>>();
        for d in 0..=step.redex_depth {
            prop_assert_eq!(shape(d, &step.before), shape(d, &step.after));
        }
    }

    #[test]
    fn circular_redexes_change_nothing(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, n, rule) = redex(&mut r, 4);
        if is_circular_redex(&rule.rule, &g, n).unwrap() {
            prop_assert_eq!(apply(&g, n, &rule).unwrap().after, g.canonicalize());
        }
    }
}
