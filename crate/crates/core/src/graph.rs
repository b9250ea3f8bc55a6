//! Term graphs over a ranked signature, positions, Δ-homomorphisms and
//! canonical forms.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A node label. Bottom and variables are nullary.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Symbol {
    Bot,
    Var(Arc<str>),
    Fun(Arc<str>),
}

impl Symbol {
    pub fn fun(name: &str) -> Symbol {
        Symbol::Fun(Arc::from(name))
    }

    pub fn var(name: &str) -> Symbol {
        Symbol::Var(Arc::from(name))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Symbol::Bot)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Symbol::Var(_))
    }

    /// Identifier without the `$` sigil; `bot` for bottom.
    pub fn name(&self) -> &str {
        match self {
            Symbol::Bot => "bot",
            Symbol::Var(s) | Symbol::Fun(s) => s,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Bot => write!(f, "bot"),
            Symbol::Var(v) => write!(f, "${v}"),
            Symbol::Fun(s) => write!(f, "{s}"),
        }
    }
}

/// Function symbols with their arities.
///
/// An open signature accepts new symbols (the parser then records their
/// arity on first use); a closed one rejects them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<Arc<str>, usize>,
    closed: bool,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn closed<'a>(symbols: impl IntoIterator<Item = (&'a str, usize)>) -> Signature {
        let mut sig = Signature::new();
        for (name, arity) in symbols {
            sig.arities.insert(Arc::from(name), arity);
        }
        sig.closed = true;
        sig
    }

    pub fn with(mut self, name: &str, arity: usize) -> Signature {
        self.arities.insert(Arc::from(name), arity);
        self
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arities.iter().map(|(k, v)| (&**k, *v))
    }

    /// Checks `name` against `arity`, recording it if unknown and the
    /// signature is open. Returns the expected arity on conflict.
    pub(crate) fn admit(&mut self, name: &str, arity: usize) -> std::result::Result<(), Option<usize>> {
        match self.arities.get(name) {
            Some(&a) if a == arity => Ok(()),
            Some(&a) => Err(Some(a)),
            None if self.closed => Err(None),
            None => {
                self.arities.insert(Arc::from(name), arity);
                Ok(())
            }
        }
    }
}

/// Opaque node identifier, dense within one graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> NodeId {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A path of successor indices starting at the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn concat(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    /// True if `self` is a prefix of `other` (not necessarily proper).
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_proper_prefix_of(&self, other: &Position) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ">")
    }
}

impl FromStr for Position {
    type Err = Error;

    /// Accepts `1,0`, `<1,0>`, the empty string and `<>`.
    fn from_str(s: &str) -> Result<Position> {
        let t = s.trim();
        let t = t.strip_prefix('<').map(|r| r.strip_suffix('>').unwrap_or(r)).unwrap_or(t);
        let t = t.trim();
        if t.is_empty() {
            return Ok(Position::root());
        }
        t.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse { offset: 0, message: format!("bad position component `{}`", p.trim()) })
            })
            .collect::<Result<Vec<_>>>()
            .map(Position)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Node {
    pub label: Symbol,
    pub succ: Vec<NodeId>,
}

impl Node {
    pub fn new(label: Symbol, succ: Vec<NodeId>) -> Node {
        Node { label, succ }
    }

    pub fn leaf(label: Symbol) -> Node {
        Node { label, succ: Vec::new() }
    }
}

/// A rooted term graph in which every node is reachable from the root.
///
/// Graphs produced by the library are in canonical form (see
/// [`TermGraph::canonicalize`]), so derived equality on them coincides with
/// isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TermGraph {
    nodes: Vec<Node>,
    root: NodeId,
}

impl TermGraph {
    /// Builds a graph, dropping nodes unreachable from `root`.
    ///
    /// Surviving nodes keep their relative order.
    pub fn new(nodes: Vec<Node>, root: NodeId) -> Result<TermGraph> {
        if root.index() >= nodes.len() {
            return Err(Error::InvalidNode(root));
        }
        for (i, n) in nodes.iter().enumerate() {
            if (n.label.is_bot() || n.label.is_var()) && !n.succ.is_empty() {
                return Err(Error::ArityMismatch {
                    node: NodeId::from(i),
                    symbol: n.label.to_string(),
                    expected: 0,
                    found: n.succ.len(),
                });
            }
            if let Some(&bad) = n.succ.iter().find(|s| s.index() >= nodes.len()) {
                return Err(Error::InvalidNode(bad));
            }
        }
        Ok(TermGraph::compact(nodes, root))
    }

    /// Builds a graph and checks every label against `sig`.
    pub fn with_signature(sig: &Signature, nodes: Vec<Node>, root: NodeId) -> Result<TermGraph> {
        let g = TermGraph::new(nodes, root)?;
        g.validate(sig)?;
        Ok(g)
    }

    pub(crate) fn from_parts(nodes: Vec<Node>, root: NodeId) -> TermGraph {
        debug_assert!(root.index() < nodes.len());
        TermGraph { nodes, root }
    }

    fn compact(nodes: Vec<Node>, root: NodeId) -> TermGraph {
        let seen = reachable(&nodes, root);
        if seen.iter().all(|&b| b) {
            return TermGraph { nodes, root };
        }
        let mut remap = vec![None; nodes.len()];
        let mut next = 0u32;
        for (i, &s) in seen.iter().enumerate() {
            if s {
                remap[i] = Some(NodeId(next));
                next += 1;
            }
        }
        let nodes = nodes
            .into_iter()
            .enumerate()
            .filter(|(i, _)| seen[*i])
            .map(|(_, n)| Node { label: n.label, succ: n.succ.iter().map(|s| remap[s.index()].unwrap()).collect() })
            .collect();
        TermGraph { nodes, root: remap[root.index()].unwrap() }
    }

    /// Checks arities against `sig`. Symbols unknown to an open signature
    /// must still be used consistently within the graph.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let mut local = sig.clone();
        for (i, n) in self.nodes.iter().enumerate() {
            if let Symbol::Fun(name) = &n.label {
                match local.admit(name, n.succ.len()) {
                    Ok(()) => {}
                    Err(Some(expected)) => {
                        return Err(Error::ArityMismatch {
                            node: NodeId::from(i),
                            symbol: name.to_string(),
                            expected,
                            found: n.succ.len(),
                        })
                    }
                    Err(None) => return Err(Error::UnknownSymbol(name.to_string())),
                }
            }
        }
        Ok(())
    }

    /// The single-node graph labelled ⊥.
    pub fn bottom() -> TermGraph {
        TermGraph::leaf(Symbol::Bot)
    }

    pub fn leaf(label: Symbol) -> TermGraph {
        TermGraph { nodes: vec![Node::leaf(label)], root: NodeId(0) }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn node(&self, n: NodeId) -> &Node {
        &self.nodes[n.index()]
    }

    pub fn label(&self, n: NodeId) -> &Symbol {
        &self.nodes[n.index()].label
    }

    pub fn succ(&self, n: NodeId) -> &[NodeId] {
        &self.nodes[n.index()].succ
    }

    pub fn contains(&self, n: NodeId) -> bool {
        n.index() < self.nodes.len()
    }

    /// True if no node is labelled ⊥.
    pub fn is_total(&self) -> bool {
        self.nodes.iter().all(|n| !n.label.is_bot())
    }

    /// Shortest-path distance from the root for every node.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.nodes.len()];
        let mut queue = VecDeque::new();
        depth[self.root.index()] = 0;
        queue.push_back(self.root);
        while let Some(n) = queue.pop_front() {
            let d = depth[n.index()];
            for &s in self.succ(n) {
                if depth[s.index()] == usize::MAX {
                    depth[s.index()] = d + 1;
                    queue.push_back(s);
                }
            }
        }
        depth
    }

    pub fn depth(&self, n: NodeId) -> usize {
        self.depths()[n.index()]
    }

    pub fn node_at(&self, pos: &Position) -> Result<NodeId> {
        let mut n = self.root;
        for &i in &pos.0 {
            n = *self.succ(n).get(i).ok_or_else(|| Error::InvalidPosition(pos.clone()))?;
        }
        Ok(n)
    }

    /// All positions of length at most `max_len`, with their nodes, in
    /// lexicographic order. This is the graph's quotient tree cut at
    /// `max_len`: two positions are equivalent iff they share a node.
    pub fn positions_up_to(&self, max_len: usize) -> Vec<(Position, NodeId)> {
        let mut out = Vec::new();
        let mut stack = vec![(Position::root(), self.root)];
        while let Some((p, n)) = stack.pop() {
            if p.len() < max_len {
                for (i, &s) in self.succ(n).iter().enumerate().rev() {
                    stack.push((p.child(i), s));
                }
            }
            out.push((p, n));
        }
        out
    }

    /// Positions of `n` of length at most `max_len`.
    pub fn positions_of(&self, n: NodeId, max_len: usize) -> Vec<Position> {
        self.positions_up_to(max_len).into_iter().filter(|(_, m)| *m == n).map(|(p, _)| p).collect()
    }

    /// Positions of `n` that have no proper prefix which is also a
    /// position of `n`, restricted to length at most `max_len`.
    ///
    /// The unrestricted set can be infinite when a cycle avoiding `n` lies
    /// on a path to it.
    pub fn min_positions(&self, n: NodeId, max_len: usize) -> Vec<Position> {
        let mut out = Vec::new();
        let mut stack = vec![(Position::root(), self.root)];
        while let Some((p, m)) = stack.pop() {
            if m == n {
                out.push(p);
                continue;
            }
            if p.len() < max_len {
                for (i, &s) in self.succ(m).iter().enumerate().rev() {
                    stack.push((p.child(i), s));
                }
            }
        }
        out
    }

    /// True if every node has exactly one position.
    pub fn is_tree(&self) -> bool {
        let mut indeg = vec![0usize; self.nodes.len()];
        for n in &self.nodes {
            for s in &n.succ {
                indeg[s.index()] += 1;
            }
        }
        indeg[self.root.index()] == 0 && indeg.iter().enumerate().all(|(i, &d)| i == self.root.index() || d == 1)
    }

    pub fn is_acyclic(&self) -> bool {
        is_acyclic_from(&self.nodes, self.root)
    }

    /// Renumbers nodes in first-visit order of a leftmost depth-first
    /// traversal from the root. Two graphs are isomorphic iff their
    /// canonical forms are equal.
    pub fn canonicalize(&self) -> TermGraph {
        self.canonical_map().0
    }

    /// Canonical form together with the old-to-new node map.
    pub fn canonical_map(&self) -> (TermGraph, Vec<NodeId>) {
        let order = dfs_order(&self.nodes, self.root);
        let mut remap = vec![NodeId(u32::MAX); self.nodes.len()];
        for (k, &n) in order.iter().enumerate() {
            remap[n.index()] = NodeId::from(k);
        }
        let nodes = order
            .iter()
            .map(|&n| Node {
                label: self.label(n).clone(),
                succ: self.succ(n).iter().map(|s| remap[s.index()]).collect(),
            })
            .collect();
        (TermGraph { nodes, root: NodeId(0) }, remap)
    }

    pub fn is_canonical(&self) -> bool {
        self.root == NodeId(0) && dfs_order(&self.nodes, self.root).iter().enumerate().all(|(k, n)| n.index() == k)
    }

    /// The canonical subgraph rooted at `n`.
    pub fn subgraph(&self, n: NodeId) -> TermGraph {
        let order = dfs_order(&self.nodes, n);
        let mut remap = vec![NodeId(u32::MAX); self.nodes.len()];
        for (k, &m) in order.iter().enumerate() {
            remap[m.index()] = NodeId::from(k);
        }
        let nodes = order
            .iter()
            .map(|&m| Node {
                label: self.label(m).clone(),
                succ: self.succ(m).iter().map(|s| remap[s.index()]).collect(),
            })
            .collect();
        TermGraph { nodes, root: NodeId(0) }
    }

    /// Same graph with the nodes renumbered by `perm` (a permutation of
    /// node indices). Useful for testing invariance under isomorphism.
    pub fn permuted(&self, perm: &[usize]) -> TermGraph {
        assert_eq!(perm.len(), self.nodes.len());
        let mut nodes = vec![Node::leaf(Symbol::Bot); self.nodes.len()];
        for (old, n) in self.nodes.iter().enumerate() {
            nodes[perm[old]] =
                Node { label: n.label.clone(), succ: n.succ.iter().map(|s| NodeId::from(perm[s.index()])).collect() };
        }
        TermGraph { nodes, root: NodeId::from(perm[self.root.index()]) }
    }
}

pub(crate) fn reachable(nodes: &[Node], root: NodeId) -> Vec<bool> {
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![root];
    seen[root.index()] = true;
    while let Some(n) = stack.pop() {
        for &s in &nodes[n.index()].succ {
            if !seen[s.index()] {
                seen[s.index()] = true;
                stack.push(s);
            }
        }
    }
    seen
}

/// Preorder of a leftmost depth-first traversal.
pub(crate) fn dfs_order(nodes: &[Node], root: NodeId) -> Vec<NodeId> {
    let mut seen = vec![false; nodes.len()];
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        if seen[n.index()] {
            continue;
        }
        seen[n.index()] = true;
        order.push(n);
        for &s in nodes[n.index()].succ.iter().rev() {
            if !seen[s.index()] {
                stack.push(s);
            }
        }
    }
    order
}

pub(crate) fn is_acyclic_from(nodes: &[Node], root: NodeId) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; nodes.len()];
    let mut stack = vec![(root, 0usize)];
    state[root.index()] = 1;
    while let Some((n, i)) = stack.pop() {
        if let Some(&s) = nodes[n.index()].succ.get(i) {
            stack.push((n, i + 1));
            match state[s.index()] {
                0 => {
                    state[s.index()] = 1;
                    stack.push((s, 0));
                }
                1 => return false,
                _ => {}
            }
        } else {
            state[n.index()] = 2;
        }
    }
    true
}

/// Finds the unique map from the nodes reachable from `src_root` into
/// `tgt` that sends `src_root` to `tgt_root`, preserves labels and
/// commutes with successors at every node whose label is not in Δ.
pub(crate) fn hom_between(
    src: &[Node],
    src_root: NodeId,
    tgt: &[Node],
    tgt_root: NodeId,
    is_delta: &dyn Fn(&Symbol) -> bool,
) -> Option<Vec<Option<NodeId>>> {
    let mut map: Vec<Option<NodeId>> = vec![None; src.len()];
    map[src_root.index()] = Some(tgt_root);
    let mut work = vec![src_root];
    while let Some(s) = work.pop() {
        let t = map[s.index()].unwrap();
        let (sn, tn) = (&src[s.index()], &tgt[t.index()]);
        if is_delta(&sn.label) {
            continue;
        }
        if sn.label != tn.label || sn.succ.len() != tn.succ.len() {
            return None;
        }
        for (&si, &ti) in sn.succ.iter().zip(&tn.succ) {
            match map[si.index()] {
                None => {
                    map[si.index()] = Some(ti);
                    work.push(si);
                }
                Some(prev) if prev != ti => return None,
                Some(_) => {}
            }
        }
    }
    Some(map)
}

/// The Δ-homomorphism from `g` to `h`, if one exists. It is unique.
pub fn find_delta_hom(g: &TermGraph, h: &TermGraph, delta: &[Symbol]) -> Option<Vec<NodeId>> {
    find_hom_by(g, h, &|s| delta.contains(s))
}

/// Like [`find_delta_hom`] with Δ given as a predicate.
pub fn find_hom_by(g: &TermGraph, h: &TermGraph, is_delta: &dyn Fn(&Symbol) -> bool) -> Option<Vec<NodeId>> {
    hom_between(&g.nodes, g.root, &h.nodes, h.root, is_delta)
        .map(|m| m.into_iter().map(|x| x.expect("all nodes reachable")).collect())
}

/// Δ-isomorphism: homomorphisms in both directions.
pub fn is_isomorphic(g: &TermGraph, h: &TermGraph, delta: &[Symbol]) -> bool {
    if delta.is_empty() {
        return g.canonicalize() == h.canonicalize();
    }
    find_delta_hom(g, h, delta).is_some() && find_delta_hom(h, g, delta).is_some()
}

/// The labelled quotient tree of a graph cut at a depth: every position of
/// length at most `depth_bound` with its label and node. Two positions are
/// equivalent iff they carry the same node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientTreeSlice {
    pub depth_bound: usize,
    pub entries: BTreeMap<Position, (Symbol, NodeId)>,
}

impl QuotientTreeSlice {
    pub fn label(&self, p: &Position) -> Option<&Symbol> {
        self.entries.get(p).map(|(s, _)| s)
    }

    /// `None` unless both positions are in the slice.
    pub fn equivalent(&self, p: &Position, q: &Position) -> Option<bool> {
        Some(self.entries.get(p)?.1 == self.entries.get(q)?.1)
    }

    /// Positions grouped by node, each class in lexicographic order.
    pub fn classes(&self) -> Vec<Vec<Position>> {
        let mut by_node: BTreeMap<NodeId, Vec<Position>> = BTreeMap::new();
        for (p, (_, n)) in &self.entries {
            by_node.entry(*n).or_default().push(p.clone());
        }
        by_node.into_values().collect()
    }
}

pub fn quotient_slice(g: &TermGraph, d: usize) -> QuotientTreeSlice {
    let entries = g.positions_up_to(d).into_iter().map(|(p, n)| (p, (g.label(n).clone(), n))).collect();
    QuotientTreeSlice { depth_bound: d, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_slices() {
        let spine: TermGraph = "%n:cons(b,%n)".parse().unwrap();
        let q = quotient_slice(&spine, 2);
        let pos = |s: &str| s.parse::<Position>().unwrap();
        let keys: Vec<String> = q.entries.keys().map(|p| p.to_string()).collect();
        assert_eq!(keys, ["<>", "<0>", "<1>", "<1,0>", "<1,1>"]);
        assert_eq!(q.equivalent(&pos(""), &pos("1")), Some(true));
        assert_eq!(q.equivalent(&pos("0"), &pos("1,0")), Some(true));
        assert_eq!(q.equivalent(&pos("0"), &pos("1")), Some(false));
        let q0 = quotient_slice(&spine, 0);
        assert_eq!(q0.entries.len(), 1);
        assert_eq!(q0.label(&Position::root()), Some(&Symbol::fun("cons")));
        let tree: TermGraph = "f(a,a)".parse().unwrap();
        assert!(quotient_slice(&tree, 3).classes().iter().all(|c| c.len() == 1));
    }

    fn f(n: &str) -> Symbol {
        Symbol::fun(n)
    }

    // %n0:f(%n1:h(%n0,%n2:c),f(%n1,%n2)) with nodes deliberately shuffled
    fn sample() -> TermGraph {
        TermGraph::new(
            vec![
                Node::new(f("f"), vec![NodeId(2), NodeId(1)]),
                Node::leaf(f("c")),
                Node::new(f("h"), vec![NodeId(3), NodeId(1)]),
                Node::new(f("f"), vec![NodeId(2), NodeId(0)]),
            ],
            NodeId(3),
        )
        .unwrap()
    }

    #[test]
    fn canonical_order_is_leftmost_preorder() {
        let g = sample().canonicalize();
        let labels: Vec<_> = g.nodes().iter().map(|n| n.label.to_string()).collect();
        assert_eq!(labels, ["f", "h", "c", "f"]);
        assert_eq!(g.succ(NodeId(0)), &[NodeId(1), NodeId(3)]);
        assert_eq!(g.succ(NodeId(1)), &[NodeId(0), NodeId(2)]);
        assert!(g.is_canonical());
        assert!(!sample().is_canonical());
    }

    #[test]
    fn gc_drops_unreachable() {
        let g = TermGraph::new(vec![Node::leaf(f("a")), Node::leaf(f("b"))], NodeId(1)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.label(g.root()), &f("b"));
    }

    #[test]
    fn depths_and_positions() {
        let g = sample().canonicalize();
        assert_eq!(g.depths(), vec![0, 1, 2, 1]);
        let p: Position = "0,1".parse().unwrap();
        assert_eq!(g.node_at(&p).unwrap(), NodeId(2));
        assert!(g.node_at(&"1,1,0".parse().unwrap()).is_err());
        // c reached via <0,1>, <1,1>, and through the cycle
        assert_eq!(g.positions_of(NodeId(2), 2).len(), 2);
        assert_eq!(g.min_positions(NodeId(0), 4), vec![Position::root()]);
        let mins = g.min_positions(NodeId(2), 4);
        assert!(mins.contains(&"0,0,0,1".parse().unwrap()));
    }

    #[test]
    fn arity_validation() {
        let sig = Signature::closed([("f", 2), ("c", 0)]);
        let bad = TermGraph::new(vec![Node::new(f("f"), vec![NodeId(1)]), Node::leaf(f("c"))], NodeId(0)).unwrap();
        assert!(matches!(bad.validate(&sig), Err(Error::ArityMismatch { .. })));
        let unknown = TermGraph::leaf(f("z"));
        assert_eq!(unknown.validate(&sig), Err(Error::UnknownSymbol("z".into())));
        assert!(unknown.validate(&Signature::new()).is_ok());
    }

    #[test]
    fn delta_hom_on_sharing() {
        // f(%n:c,%n) -> f(c,c) is not a homomorphism, the converse is
        let shared =
            TermGraph::new(vec![Node::new(f("f"), vec![NodeId(1), NodeId(1)]), Node::leaf(f("c"))], NodeId(0)).unwrap();
        let tree = TermGraph::new(
            vec![Node::new(f("f"), vec![NodeId(1), NodeId(2)]), Node::leaf(f("c")), Node::leaf(f("c"))],
            NodeId(0),
        )
        .unwrap();
        assert!(find_delta_hom(&shared, &tree, &[]).is_none());
        assert!(find_delta_hom(&tree, &shared, &[]).is_some());
        assert!(!is_isomorphic(&tree, &shared, &[]));
    }

    #[test]
    fn delta_isomorphism_ignores_delta_labels() {
        let a = TermGraph::leaf(f("a"));
        let b = TermGraph::leaf(f("b"));
        assert!(is_isomorphic(&a, &b, &[f("a"), f("b")]));
        assert!(!is_isomorphic(&a, &b, &[]));
    }

    #[test]
    fn position_parsing() {
        assert_eq!("".parse::<Position>().unwrap(), Position::root());
        assert_eq!("<>".parse::<Position>().unwrap(), Position::root());
        assert_eq!("<1,0>".parse::<Position>().unwrap().to_string(), "<1,0>");
        assert!("1,x".parse::<Position>().is_err());
    }
}
