//! Truncations, similarity and the induced ultrametric.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::graph::{Node, NodeId, Symbol, TermGraph};

/// A truncation depth, possibly infinite.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Depth {
    Finite(usize),
    Infinite,
}

impl From<usize> for Depth {
    fn from(d: usize) -> Depth {
        Depth::Finite(d)
    }
}

impl std::str::FromStr for Depth {
    type Err = String;

    /// A decimal number, or `inf`.
    fn from_str(s: &str) -> Result<Depth, String> {
        match s {
            "inf" | "∞" => Ok(Depth::Infinite),
            _ => s.parse().map(Depth::Finite).map_err(|_| format!("`{s}` is not a depth")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum TruncationVariant {
    /// Keep nodes of depth at most `d`; those at depth exactly `d` become
    /// ⊥ leaves.
    Strict,
    /// Keep nodes of depth below `d` and give every edge leaving that set
    /// its own fresh ⊥ leaf.
    FreshFringe,
    /// Like `FreshFringe`, but edges from depth `d-1` that close a cycle
    /// are cut as well.
    CycleFringe,
    /// Keep nodes of depth below `d` together with all their acyclic
    /// predecessors; edges leaving that set, and cyclic edges from depth
    /// at least `d-1`, go to fresh ⊥ leaves.
    Rigid,
    /// Keeps the same nodes as `Rigid`, but edges leaving the kept set go
    /// to the original target relabelled ⊥, so sharing among the cut-off
    /// nodes survives. Cyclic edges are kept.
    RigidSharedFringe,
}

impl TruncationVariant {
    pub const ALL: [TruncationVariant; 5] = [
        TruncationVariant::Strict,
        TruncationVariant::FreshFringe,
        TruncationVariant::CycleFringe,
        TruncationVariant::Rigid,
        TruncationVariant::RigidSharedFringe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TruncationVariant::Strict => "strict",
            TruncationVariant::FreshFringe => "fresh-fringe",
            TruncationVariant::CycleFringe => "cycle-fringe",
            TruncationVariant::Rigid => "rigid",
            TruncationVariant::RigidSharedFringe => "rigid-shared",
        }
    }

    pub fn from_name(s: &str) -> Option<TruncationVariant> {
        TruncationVariant::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// `acyclic[m]` lists the predecessors `n` of `m` that are acyclic: `m` is
/// not the root, `n != m`, and `n` is reachable from the root without
/// passing through `m`.
pub fn acyclic_predecessors(g: &TermGraph) -> Vec<Vec<NodeId>> {
    let mut out = vec![Vec::new(); g.len()];
    for m in g.node_ids() {
        if m == g.root() {
            continue;
        }
        let avoid = reachable_avoiding(g, m);
        for n in g.node_ids() {
            if n != m && avoid[n.index()] && g.succ(n).contains(&m) {
                out[m.index()].push(n);
            }
        }
    }
    out
}

fn reachable_avoiding(g: &TermGraph, m: NodeId) -> Vec<bool> {
    let mut seen = vec![false; g.len()];
    let mut stack = vec![g.root()];
    seen[g.root().index()] = true;
    while let Some(n) = stack.pop() {
        for &s in g.succ(n) {
            if s != m && !seen[s.index()] {
                seen[s.index()] = true;
                stack.push(s);
            }
        }
    }
    seen
}

/// Nodes kept by the rigid truncation at `d`: depth below `d`, closed
/// under acyclic predecessors.
pub fn rigid_nodes(g: &TermGraph, d: usize, depths: &[usize], acy: &[Vec<NodeId>]) -> Vec<bool> {
    let mut keep: Vec<bool> = depths.iter().map(|&x| x < d).collect();
    let mut work: Vec<NodeId> = g.node_ids().filter(|n| keep[n.index()]).collect();
    while let Some(m) = work.pop() {
        for &n in &acy[m.index()] {
            if !keep[n.index()] {
                keep[n.index()] = true;
                work.push(n);
            }
        }
    }
    keep
}

enum Edge {
    Keep,
    Fresh,
}

// Builds the graph on `keep` whose edges are decided by `edge`. Targets
// outside `keep` that are not sent to a fresh leaf become shared ⊥ leaves.
fn assemble(g: &TermGraph, keep: &[bool], edge: impl Fn(NodeId, usize, NodeId) -> Edge) -> TermGraph {
    let mut id = vec![None; g.len()];
    let mut nodes: Vec<Node> = Vec::new();
    for n in g.node_ids() {
        if keep[n.index()] {
            id[n.index()] = Some(NodeId::from(nodes.len()));
            nodes.push(Node::leaf(g.label(n).clone()));
        }
    }
    for n in g.node_ids().filter(|n| keep[n.index()]) {
        let mut succ = Vec::new();
        for (i, &s) in g.succ(n).iter().enumerate() {
            let target = match edge(n, i, s) {
                Edge::Keep => match id[s.index()] {
                    Some(t) => t,
                    None => {
                        let t = NodeId::from(nodes.len());
                        nodes.push(Node::leaf(Symbol::Bot));
                        id[s.index()] = Some(t);
                        t
                    }
                },
                Edge::Fresh => {
                    nodes.push(Node::leaf(Symbol::Bot));
                    NodeId::from(nodes.len() - 1)
                }
            };
            succ.push(target);
        }
        nodes[id[n.index()].unwrap().index()].succ = succ;
    }
    TermGraph::from_parts(nodes, id[g.root().index()].unwrap()).canonicalize()
}

/// Truncates `g` at depth `d`. The result is canonical; depth 0 gives ⊥
/// and an infinite depth gives `g` itself.
pub fn truncate(g: &TermGraph, d: Depth, variant: TruncationVariant) -> TermGraph {
    let d = match d {
        Depth::Infinite => return g.canonicalize(),
        Depth::Finite(0) => return TermGraph::bottom(),
        Depth::Finite(d) => d,
    };
    let depths = g.depths();
    match variant {
        TruncationVariant::Strict => {
            // nodes at depth d are kept as ⊥ leaves
            let mut nodes = Vec::with_capacity(g.len());
            let mut id = vec![None; g.len()];
            for n in g.node_ids().filter(|n| depths[n.index()] <= d) {
                id[n.index()] = Some(NodeId::from(nodes.len()));
                let label = if depths[n.index()] == d { Symbol::Bot } else { g.label(n).clone() };
                nodes.push(Node::leaf(label));
            }
            for n in g.node_ids().filter(|n| depths[n.index()] < d) {
                nodes[id[n.index()].unwrap().index()].succ = g.succ(n).iter().map(|s| id[s.index()].unwrap()).collect();
            }
            TermGraph::from_parts(nodes, id[g.root().index()].unwrap()).canonicalize()
        }
        TruncationVariant::FreshFringe => {
            let keep: Vec<bool> = depths.iter().map(|&x| x < d).collect();
            assemble(g, &keep, |_, _, s| if keep[s.index()] { Edge::Keep } else { Edge::Fresh })
        }
        TruncationVariant::CycleFringe => {
            let keep: Vec<bool> = depths.iter().map(|&x| x < d).collect();
            let acy = acyclic_predecessors(g);
            assemble(g, &keep, |n, _, s| {
                let cut = !keep[s.index()] || (depths[n.index()] + 1 == d && !acy[s.index()].contains(&n));
                if cut {
                    Edge::Fresh
                } else {
                    Edge::Keep
                }
            })
        }
        TruncationVariant::Rigid => {
            let acy = acyclic_predecessors(g);
            let keep = rigid_nodes(g, d, &depths, &acy);
            assemble(g, &keep, |n, _, s| {
                let cut = !keep[s.index()] || (depths[n.index()] + 1 >= d && !acy[s.index()].contains(&n));
                if cut {
                    Edge::Fresh
                } else {
                    Edge::Keep
                }
            })
        }
        TruncationVariant::RigidSharedFringe => {
            let acy = acyclic_predecessors(g);
            let keep = rigid_nodes(g, d, &depths, &acy);
            assemble(g, &keep, |_, _, _| Edge::Keep)
        }
    }
}

/// Similarity of two graphs: the largest depth at which their truncations
/// are isomorphic, infinite iff the graphs are.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Similarity {
    Finite(usize),
    Infinite,
}

impl PartialOrd for Similarity {
    fn partial_cmp(&self, other: &Similarity) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Similarity {
    fn cmp(&self, other: &Similarity) -> Ordering {
        match (self, other) {
            (Similarity::Finite(a), Similarity::Finite(b)) => a.cmp(b),
            (Similarity::Finite(_), Similarity::Infinite) => Ordering::Less,
            (Similarity::Infinite, Similarity::Finite(_)) => Ordering::Greater,
            (Similarity::Infinite, Similarity::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Similarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Similarity::Finite(k) => write!(f, "{k}"),
            Similarity::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Similarity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Similarity::Finite(k) => s.serialize_u64(*k as u64),
            Similarity::Infinite => s.serialize_str("inf"),
        }
    }
}

pub fn similarity(g: &TermGraph, h: &TermGraph, variant: TruncationVariant) -> Similarity {
    if g.canonicalize() == h.canonicalize() {
        return Similarity::Infinite;
    }
    // beyond the larger node count every truncation is the graph itself
    let bound = g.len().max(h.len()) + 2;
    for d in 1..=bound {
        if truncate(g, Depth::Finite(d), variant) != truncate(h, Depth::Finite(d), variant) {
            return Similarity::Finite(d - 1);
        }
    }
    unreachable!("distinct graphs agree on every truncation")
}

/// The distance `2^-sim`, kept as its exponent so it stays exact.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Distance {
    pub exponent: Similarity,
}

impl Distance {
    pub fn value(self) -> f64 {
        match self.exponent {
            Similarity::Finite(k) => 0.5f64.powi(k as i32),
            Similarity::Infinite => 0.0,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            Similarity::Finite(k) => write!(f, "2^-{k}"),
            Similarity::Infinite => write!(f, "0"),
        }
    }
}

pub fn distance(g: &TermGraph, h: &TermGraph, variant: TruncationVariant) -> Distance {
    Distance { exponent: similarity(g, h, variant) }
}

/// Least index from which all truncations at `d` in the window coincide,
/// provided that stretch covers at least the latter half of the window.
pub fn cauchy_window(gs: &[TermGraph], d: usize, variant: TruncationVariant) -> Option<usize> {
    let last = gs.last()?;
    let target = truncate(last, Depth::Finite(d), variant);
    let mut beta = gs.len() - 1;
    while beta > 0 && truncate(&gs[beta - 1], Depth::Finite(d), variant) == target {
        beta -= 1;
    }
    (beta <= (gs.len() - 1) / 2).then_some(beta)
}

/// Strict truncation at `d` of the metric limit, when the window shows
/// the sequence to be Cauchy at that depth.
pub fn metric_limit_window(gs: &[TermGraph], d: usize) -> Option<TermGraph> {
    let beta = cauchy_window(gs, d, TruncationVariant::Strict)?;
    Some(truncate(&gs[beta], Depth::Finite(d), TruncationVariant::Strict))
}
