mod common;

use common::{graph, neighbour, rng};
use proptest::prelude::*;
use termgraph::{quotient_slice, similarity, truncate, Depth, Similarity, Symbol, TermGraph, TruncationVariant};

use TruncationVariant::*;

fn strict(g: &TermGraph, d: usize) -> TermGraph {
    truncate(g, Depth::Finite(d), Strict)
}

fn gap(a: Similarity, b: Similarity) -> Option<usize> {
    match (a, b) {
        (Similarity::Finite(a), Similarity::Finite(b)) => Some(a.abs_diff(b)),
        (Similarity::Infinite, Similarity::Infinite) => Some(0),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn truncation_axioms(seed in any::<u64>(), d in 1usize..7) {
        let mut r = rng(seed);
        let g = graph(&mut r, 6);
        let h = neighbour(&mut r, &g, 6);
        for v in TruncationVariant::ALL {
            prop_assert_eq!(truncate(&g, Depth::Finite(0), v), TermGraph::bottom());
            prop_assert_eq!(truncate(&g, Depth::Infinite, v), g.canonicalize());
            if truncate(&g, Depth::Finite(d), v) == truncate(&h, Depth::Finite(d), v) {
                for e in 0..d {
                    prop_assert_eq!(truncate(&g, Depth::Finite(e), v), truncate(&h, Depth::Finite(e), v));
                }
            }
        }
    }

    #[test]
    fn strict_truncation_keeps_positions_and_depths(seed in any::<u64>(), d in 0usize..6) {
        let mut r = rng(seed);
        let g = graph(&mut r, 6);
        let t = strict(&g, d);
        let (gd, td) = (g.depths(), t.depths());
        let pos = |x: &TermGraph| x.positions_up_to(d).into_iter().map(|(p, _)| p).collect::<Vec<_>>();
        prop_assert_eq!(pos(&g), pos(&t));
        for (p, n) in g.positions_up_to(d.saturating_sub(1)) {
            if p.len() < d {
                let m = t.node_at(&p).unwrap();
                prop_assert_eq!(g.label(n), t.label(m));
                if gd[n.index()] < d {
                    prop_assert_eq!(gd[n.index()], td[m.index()]);
                }
            }
        }
    }

    #[test]
    fn strict_truncation_slices(seed in any::<u64>(), d in 0usize..5) {
        let mut r = rng(seed);
        let g = graph(&mut r, 6);
        let depths = g.depths();
        let t = strict(&g, d);
        for k in 0..=d + 1 {
            let actual = quotient_slice(&t, k);
            let full = quotient_slice(&g, k);
            // positions whose proper prefixes all reach nodes of depth < d
            let expected: Vec<_> = full
                .entries
                .iter()
                .filter(|(p, _)| (0..p.len()).all(|i| depths[g.node_at(&termgraph::Position(p.0[..i].to_vec())).unwrap().index()] < d))
                .collect();
            prop_assert_eq!(actual.entries.len(), expected.len());
            for (p, (label, n)) in &expected {
                let (tl, _) = &actual.entries[*p];
                let want = if depths[n.index()] < d { (*label).clone() } else { Symbol::Bot };
                prop_assert_eq!(tl, &want);
                for (q, (_, m)) in &expected {
                    prop_assert_eq!(actual.equivalent(p, q), Some(n == m));
                }
            }
        }
    }

    #[test]
    fn fringe_variants_stay_within_one(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = graph(&mut r, 6);
        let h = neighbour(&mut r, &g, 6);
        let s = similarity(&g, &h, Strict);
        for v in [FreshFringe, CycleFringe] {
            let gap = gap(s, similarity(&g, &h, v));
            prop_assert!(matches!(gap, Some(0 | 1)), "{} vs {}: {:?}", g, h, gap);
        }
    }

    #[test]
    fn ultrametric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = graph(&mut r, 6);
        let b = neighbour(&mut r, &a, 6);
        let c = neighbour(&mut r, &b, 6);
        for v in TruncationVariant::ALL {
            prop_assert_eq!(similarity(&a, &a, v), Similarity::Infinite);
            prop_assert_eq!(similarity(&a, &b, v) == Similarity::Infinite, a == b);
            prop_assert_eq!(similarity(&a, &b, v), similarity(&b, &a, v));
            let ac = similarity(&a, &c, v);
            prop_assert!(ac >= similarity(&a, &b, v).min(similarity(&b, &c, v)));
        }
    }
}
