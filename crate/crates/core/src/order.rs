//! The ⊥-homomorphism order on partial term graphs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{find_hom_by, Node, NodeId, Symbol, TermGraph};
use crate::metric::{truncate, Depth, TruncationVariant};

/// `g ≤⊥ h`: a homomorphism from `g` to `h` that may map ⊥-nodes anywhere.
pub fn le_bot(g: &TermGraph, h: &TermGraph) -> bool {
    find_hom_by(g, h, &Symbol::is_bot).is_some()
}

/// Binary greatest lower bound by the product construction: a pair of
/// nodes keeps its common label if both agree, and becomes a ⊥ leaf
/// otherwise.
pub fn glb2(g: &TermGraph, h: &TermGraph) -> TermGraph {
    let mut index: HashMap<(NodeId, NodeId), NodeId> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut work = Vec::new();
    let start = (g.root(), h.root());
    index.insert(start, NodeId(0));
    nodes.push(Node::leaf(Symbol::Bot));
    work.push(start);
    while let Some((a, b)) = work.pop() {
        let id = index[&(a, b)];
        let (na, nb) = (g.node(a), h.node(b));
        if na.label != nb.label || na.succ.len() != nb.succ.len() {
            continue;
        }
        let mut succ = Vec::with_capacity(na.succ.len());
        for (&sa, &sb) in na.succ.iter().zip(&nb.succ) {
            let next = NodeId::from(nodes.len());
            let s = *index.entry((sa, sb)).or_insert_with(|| {
                nodes.push(Node::leaf(Symbol::Bot));
                work.push((sa, sb));
                next
            });
            succ.push(s);
        }
        nodes[id.index()] = Node::new(na.label.clone(), succ);
    }
    TermGraph::from_parts(nodes, NodeId(0)).canonicalize()
}

/// Greatest lower bound of a non-empty list.
pub fn glb(gs: &[TermGraph]) -> Result<TermGraph> {
    let (first, rest) = gs.split_first().ok_or(Error::EmptyInput)?;
    Ok(rest.iter().fold(first.canonicalize(), |acc, g| glb2(&acc, g)))
}

/// Least upper bound of a directed list, i.e. its greatest element.
pub fn lub_directed(gs: &[TermGraph]) -> Result<TermGraph> {
    if gs.is_empty() {
        return Err(Error::EmptyInput);
    }
    gs.iter().find(|top| gs.iter().all(|g| le_bot(g, top))).map(TermGraph::canonicalize).ok_or(Error::NotDirected)
}

/// Tail glbs `glb(gs[β..])` for every β, computed right to left.
pub fn tail_glbs(gs: &[TermGraph]) -> Vec<TermGraph> {
    let mut out: Vec<TermGraph> = Vec::with_capacity(gs.len());
    for g in gs.iter().rev() {
        let next = match out.last() {
            None => g.canonicalize(),
            Some(acc) => glb2(g, acc),
        };
        out.push(next);
    }
    out.reverse();
    out
}

/// Limit inferior of a finite sequence: the lub of its tail glbs, which
/// is the last element.
pub fn liminf(gs: &[TermGraph]) -> Result<TermGraph> {
    if gs.is_empty() {
        return Err(Error::EmptyInput);
    }
    lub_directed(&tail_glbs(gs))
}

/// Estimates the limit inferior of an infinite sequence from a finite
/// window, at depth `d`.
///
/// Only tails covering at least half of the window are considered, so the
/// last few elements cannot dominate. Returns the strict truncation at
/// `d` of the glb of the shortest such tail, and whether those truncated
/// tail glbs are constant over the latter half of the considered range.
pub fn liminf_window(gs: &[TermGraph], d: usize) -> Result<(TermGraph, bool)> {
    if gs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let half = (gs.len() - 1) / 2;
    let tails = tail_glbs(gs);
    let cut = |g: &TermGraph| truncate(g, Depth::Finite(d), TruncationVariant::Strict);
    let value = cut(&tails[half]);
    let stable = tails[half / 2..=half].iter().all(|t| cut(t) == value);
    Ok((value, stable))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> TermGraph {
        s.parse().unwrap()
    }

    #[test]
    fn bottom_is_least() {
        for s in ["a", "f(a,b)", "%n:f(%n,bot)"] {
            assert!(le_bot(&TermGraph::bottom(), &g(s)));
        }
        assert!(!le_bot(&g("a"), &TermGraph::bottom()));
    }

    #[test]
    fn sharing_makes_graphs_larger() {
        assert!(le_bot(&g("f(c,c)"), &g("f(%n:c,%n)")));
        assert!(!le_bot(&g("f(%n:c,%n)"), &g("f(c,c)")));
        assert!(le_bot(&g("f(%n:bot,%n)"), &g("f(%n:a,%n)")));
        assert!(!le_bot(&g("f(%n:bot,%n)"), &g("f(a,b)")));
    }

    #[test]
    fn glb_examples() {
        assert_eq!(glb(&[g("f(a,b)"), g("f(a,c)")]).unwrap(), g("f(a,bot)"));
        assert_eq!(glb(&[g("f(%n:c,%n)"), g("f(c,c)")]).unwrap(), g("f(c,c)"));
        assert_eq!(glb(&[g("a"), g("b")]).unwrap(), TermGraph::bottom());
        assert_eq!(glb(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn glb_of_unfoldings() {
        // %n:f(%n) against f(f(a)) agrees on two levels
        let x = glb(&[g("%n:f(%n)"), g("f(f(a))")]).unwrap();
        assert_eq!(x, g("f(f(bot))"));
    }

    #[test]
    fn lub_needs_directedness() {
        let chain = [g("bot"), g("f(bot,bot)"), g("f(a,bot)")];
        assert_eq!(lub_directed(&chain).unwrap(), g("f(a,bot)"));
        assert_eq!(lub_directed(&[g("a"), g("b")]), Err(Error::NotDirected));
    }

    #[test]
    fn liminf_of_finite_sequence_is_last() {
        let seq = [g("a"), g("f(a,b)"), g("b")];
        assert_eq!(liminf(&seq).unwrap(), g("b"));
    }

    #[test]
    fn liminf_window_of_alternation() {
        let seq: Vec<_> = (0..10).map(|i| if i % 2 == 0 { g("f(c,c)") } else { g("f(%n:c,%n)") }).collect();
        for d in 2..5 {
            assert_eq!(liminf_window(&seq, d).unwrap(), (g("f(c,c)"), true));
        }
        let constant = vec![g("h(a)"); 4];
        assert_eq!(liminf_window(&constant, 1).unwrap(), (g("h(bot)"), true));
    }
}
