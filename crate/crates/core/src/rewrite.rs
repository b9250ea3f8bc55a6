//! Term graph rules, matching, single rewrite steps and reduction
//! contexts.

use crate::error::{Error, Result};
use crate::graph::{hom_between, is_acyclic_from, reachable, Node, NodeId, Signature, Symbol, TermGraph};

/// A rule: one graph with a left root and a right root. The left-hand side
/// is everything reachable from the left root; variables are nullary
/// nodes labelled `$x`, each name occurring at most once.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    nodes: Vec<Node>,
    lhs_root: NodeId,
    rhs_root: NodeId,
    in_lhs: Vec<bool>,
}

impl Rule {
    /// Builds a rule, dropping nodes reachable from neither root and
    /// merging variable nodes that carry the same name.
    pub fn new(nodes: Vec<Node>, lhs_root: NodeId, rhs_root: NodeId) -> Result<Rule> {
        for &r in &[lhs_root, rhs_root] {
            if r.index() >= nodes.len() {
                return Err(Error::InvalidNode(r));
            }
        }
        if nodes.iter().flat_map(|n| &n.succ).any(|s| s.index() >= nodes.len()) {
            return Err(Error::InvalidNode(NodeId(u32::MAX)));
        }
        if nodes[lhs_root.index()].label.is_var() {
            return Err(Error::LhsRootIsVariable);
        }
        // merge same-named variables onto their first occurrence
        let mut canon: Vec<NodeId> = (0..nodes.len()).map(NodeId::from).collect();
        for i in 0..nodes.len() {
            if let Symbol::Var(v) = &nodes[i].label {
                if let Some(j) = (0..i).find(|&j| nodes[j].label == Symbol::Var(v.clone())) {
                    canon[i] = canon[j];
                }
            }
        }
        let mut nodes = nodes;
        for n in &mut nodes {
            for s in &mut n.succ {
                *s = canon[s.index()];
            }
        }
        let (lhs_root, rhs_root) = (canon[lhs_root.index()], canon[rhs_root.index()]);

        let from_l = reachable(&nodes, lhs_root);
        let from_r = reachable(&nodes, rhs_root);
        let keep: Vec<bool> = from_l.iter().zip(&from_r).map(|(a, b)| *a || *b).collect();
        let mut id = vec![NodeId(u32::MAX); nodes.len()];
        let mut kept = Vec::new();
        for (i, n) in nodes.iter().enumerate() {
            if keep[i] {
                id[i] = NodeId::from(kept.len());
                kept.push(n.clone());
            }
        }
        for n in &mut kept {
            for s in &mut n.succ {
                *s = id[s.index()];
            }
        }
        let (lhs_root, rhs_root) = (id[lhs_root.index()], id[rhs_root.index()]);
        let in_lhs = reachable(&kept, lhs_root);
        for (i, n) in kept.iter().enumerate() {
            if n.label.is_var() && !in_lhs[i] {
                return Err(Error::VariableNotInLhs(n.label.name().to_string()));
            }
        }
        Ok(Rule { nodes: kept, lhs_root, rhs_root, in_lhs })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn lhs_root(&self) -> NodeId {
        self.lhs_root
    }

    pub fn rhs_root(&self) -> NodeId {
        self.rhs_root
    }

    pub fn in_lhs(&self, n: NodeId) -> bool {
        self.in_lhs[n.index()]
    }

    /// The left-hand side as a canonical graph.
    pub fn lhs(&self) -> TermGraph {
        TermGraph::from_parts(self.nodes.clone(), self.lhs_root).subgraph(self.lhs_root)
    }

    /// The right-hand side as a canonical graph.
    pub fn rhs(&self) -> TermGraph {
        TermGraph::from_parts(self.nodes.clone(), self.rhs_root).subgraph(self.rhs_root)
    }

    /// Left-linear: the left-hand side is a tree.
    pub fn is_left_linear(&self) -> bool {
        self.lhs().is_tree()
    }

    /// Collapsing: the right root lies in the left-hand side.
    pub fn is_collapsing(&self) -> bool {
        self.in_lhs(self.rhs_root)
    }

    /// Length of the longest path in an acyclic left-hand side.
    pub fn lhs_height(&self) -> usize {
        fn go(nodes: &[Node], n: NodeId) -> usize {
            nodes[n.index()].succ.iter().map(|&s| 1 + go(nodes, s)).max().unwrap_or(0)
        }
        if is_acyclic_from(&self.nodes, self.lhs_root) {
            go(&self.nodes, self.lhs_root)
        } else {
            self.nodes.len()
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NamedRule {
    pub name: String,
    pub rule: Rule,
}

/// A graph rewriting system: a signature and an ordered list of rules.
#[derive(Clone, Debug, Default)]
pub struct Grs {
    signature: Signature,
    rules: Vec<NamedRule>,
}

impl Grs {
    pub fn new(signature: Signature, rules: Vec<NamedRule>) -> Grs {
        Grs { signature, rules }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[NamedRule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Result<&NamedRule> {
        self.rules.iter().find(|r| r.name == name).ok_or_else(|| Error::UnknownRule(name.to_string()))
    }

    pub fn rule_index(&self, name: &str) -> Result<usize> {
        self.rules.iter().position(|r| r.name == name).ok_or_else(|| Error::UnknownRule(name.to_string()))
    }
}

/// A matching of a rule's left-hand side at a node: `map[m]` is the image
/// of rule node `m` for every left-hand node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Match {
    map: Vec<Option<NodeId>>,
}

impl Match {
    pub fn image(&self, m: NodeId) -> Option<NodeId> {
        self.map[m.index()]
    }
}

/// Matches the left-hand side of `rule` at node `n` of `g`. Variables map
/// anywhere; other nodes must agree in label and successors.
pub fn match_at(rule: &Rule, g: &TermGraph, n: NodeId) -> Option<Match> {
    hom_between(&rule.nodes, rule.lhs_root, g.nodes(), n, &Symbol::is_var).map(|map| Match { map })
}

/// All redexes as `(rule index, node)`, in rule order and then node order.
pub fn find_redexes(grs: &Grs, g: &TermGraph) -> Vec<(usize, NodeId)> {
    let mut out = Vec::new();
    for (k, r) in grs.rules.iter().enumerate() {
        for n in g.node_ids() {
            if match_at(&r.rule, g, n).is_some() {
                out.push((k, n));
            }
        }
    }
    out
}

/// A rewrite step with everything needed to check it. Node ids refer to
/// the canonical `before` and `after` graphs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub before: TermGraph,
    pub after: TermGraph,
    pub rule: String,
    pub redex: NodeId,
    pub reduct_root: NodeId,
    pub redex_depth: usize,
    /// Canonical local truncation of `before` at the redex.
    pub context: TermGraph,
    /// The reduct is a node of `before` other than the redex that the
    /// context keeps, i.e. one reachable from the root without passing
    /// through the redex. Only collapsing rules produce this. The context
    /// is then not preserved up to isomorphism.
    pub reduct_in_context: bool,
}

/// Applies `rule` at node `n` of `g`.
///
/// The right-hand side is copied next to `g` with edges into the left-hand
/// side routed through the matching, every edge into `n` is redirected to
/// the image of the right root, and unreachable nodes are dropped.
pub fn apply(g: &TermGraph, n: NodeId, rule: &NamedRule) -> Result<Step> {
    if !g.contains(n) {
        return Err(Error::InvalidNode(n));
    }
    let (before, remap) = g.canonical_map();
    let n = remap[n.index()];
    let r = &rule.rule;
    let m = match_at(r, &before, n).ok_or(Error::NotApplicable)?;

    let mut nodes: Vec<Node> = before.nodes().to_vec();
    let mut copy = vec![None; r.nodes.len()];
    for (i, rn) in r.nodes.iter().enumerate() {
        if !r.in_lhs[i] {
            copy[i] = Some(NodeId::from(nodes.len()));
            nodes.push(Node::leaf(rn.label.clone()));
        }
    }
    let image = |k: NodeId| m.image(k).or(copy[k.index()]).unwrap();
    for (i, rn) in r.nodes.iter().enumerate() {
        if let Some(c) = copy[i] {
            nodes[c.index()].succ = rn.succ.iter().map(|&s| image(s)).collect();
        }
    }
    let target = image(r.rhs_root);
    let reduct_in_context =
        target != n && target.index() < before.len() && reachable_avoiding(&before, n)[target.index()];
    for node in &mut nodes {
        for s in &mut node.succ {
            if *s == n {
                *s = target;
            }
        }
    }
    let root = if before.root() == n { target } else { before.root() };
    let raw = TermGraph::from_parts(nodes, root);
    let (after, map) = raw.canonical_map();
    Ok(Step {
        redex_depth: before.depth(n),
        context: local_truncate(&before, &[n]),
        after,
        reduct_root: map[target.index()],
        rule: rule.name.clone(),
        redex: n,
        before,
        reduct_in_context,
    })
}

// Nodes reachable from the root along paths that do not leave `avoid`.
fn reachable_avoiding(g: &TermGraph, avoid: NodeId) -> Vec<bool> {
    let mut seen = vec![false; g.len()];
    let mut stack = vec![g.root()];
    while let Some(m) = stack.pop() {
        if seen[m.index()] {
            continue;
        }
        seen[m.index()] = true;
        if m != avoid {
            stack.extend(g.succ(m));
        }
    }
    seen
}

/// Local truncation: the nodes in `cut` become ⊥ leaves and whatever is
/// then unreachable is dropped. The result is canonical.
pub fn local_truncate(g: &TermGraph, cut: &[NodeId]) -> TermGraph {
    let nodes = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| if cut.contains(&NodeId::from(i)) { Node::leaf(Symbol::Bot) } else { node.clone() })
        .collect();
    TermGraph::from_parts(nodes, g.root()).canonicalize()
}

/// A redex is circular if the left and right roots differ but the
/// matching sends both to the same node. Contracting it changes nothing.
pub fn is_circular_redex(rule: &Rule, g: &TermGraph, n: NodeId) -> Result<bool> {
    let m = match_at(rule, g, n).ok_or(Error::NotApplicable)?;
    Ok(rule.lhs_root != rule.rhs_root && rule.in_lhs(rule.rhs_root) && m.image(rule.lhs_root) == m.image(rule.rhs_root))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RuleClass {
    pub left_linear: bool,
    pub collapsing: bool,
}

pub fn classify_rule(rule: &Rule) -> RuleClass {
    RuleClass { left_linear: rule.is_left_linear(), collapsing: rule.is_collapsing() }
}

/// Two redexes are disjoint if neither root is the image of a non-variable
/// left-hand node of the other.
pub fn disjoint_redexes(g: &TermGraph, a: (&Rule, NodeId), b: (&Rule, NodeId)) -> Result<bool> {
    let ma = match_at(a.0, g, a.1).ok_or(Error::NotApplicable)?;
    let mb = match_at(b.0, g, b.1).ok_or(Error::NotApplicable)?;
    let covers = |r: &Rule, m: &Match, target: NodeId| {
        r.nodes
            .iter()
            .enumerate()
            .any(|(i, node)| r.in_lhs[i] && !node.label.is_var() && m.image(NodeId::from(i)) == Some(target))
    };
    Ok(!covers(a.0, &ma, b.1) && !covers(b.0, &mb, a.1))
}

/// Checks the invariants expected of a step and describes each violation.
/// Positions and minimal positions are compared up to length `bound`.
///
/// The context isomorphism and the minimal positions can fail when
/// [`Step::reduct_in_context`] holds; the order checks cannot.
pub fn step_violations(step: &Step, bound: usize) -> Vec<String> {
    let mut out = Vec::new();
    let le = crate::order::le_bot;
    if !le(&step.context, &step.before) {
        out.push("context is not below the source".into());
    }
    if !le(&step.context, &step.after) {
        out.push("context is not below the target".into());
    }
    if local_truncate(&step.after, &[step.reduct_root]) != step.context {
        out.push("local truncations at redex and reduct differ".into());
    }
    if step.before.min_positions(step.redex, bound) != step.after.min_positions(step.reduct_root, bound) {
        out.push("minimal positions of redex and reduct differ".into());
    }
    let e = step.redex_depth.min(bound);
    let shape = |g: &TermGraph| g.positions_up_to(e).into_iter().map(|(p, _)| p).collect::<Vec<_>>();
    if shape(&step.before) != shape(&step.after) {
        out.push(format!("positions up to the redex depth {e} changed"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_rule;

    fn g(s: &str) -> TermGraph {
        s.parse().unwrap()
    }

    fn rule(name: &str, s: &str) -> NamedRule {
        NamedRule { name: name.into(), rule: parse_rule(s, &mut Signature::new()).unwrap() }
    }

    #[test]
    fn cyclic_reduct() {
        let rho2 = rule("rho2", "%n:cons(a,$x) -> cons(b,%n)");
        let step = apply(&g("cons(a,c)"), NodeId(0), &rho2).unwrap();
        assert_eq!(step.after.to_string(), "%n0:cons(b,%n0)");
        assert_eq!(step.context, TermGraph::bottom());
        assert_eq!(step.reduct_root, NodeId(0));
    }

    #[test]
    fn unfolding_a_cycle() {
        let rho1 = rule("rho1", "cons(a,$x) -> cons(b,cons(a,$x))");
        let step = apply(&g("%n:cons(a,%n)"), NodeId(0), &rho1).unwrap();
        assert_eq!(step.after.to_string(), "%n0:cons(b,cons(a,%n0))");
        let step = apply(&step.after, NodeId(2), &rho1).unwrap();
        assert_eq!(step.after.to_string(), "%n0:cons(b,cons(b,cons(a,%n0)))");
        assert_eq!(step.redex_depth, 1);
        assert!(step_violations(&step, 6).is_empty());
    }

    #[test]
    fn y_combinator_rules() {
        let y2 = rule("y2", "%n:@(Y,$x) -> @($x,%n)");
        let step = apply(&g("@(Y,f)"), NodeId(0), &y2).unwrap();
        assert_eq!(step.after.to_string(), "%n0:@(f,%n0)");
        let y1 = rule("y1", "@(Y,$x) -> @($x,@(Y,$x))");
        let step = apply(&g("@(Y,f)"), NodeId(0), &y1).unwrap();
        assert_eq!(step.after.to_string(), "@(%n1:f,@(Y,%n1))");
    }

    #[test]
    fn collapsing_and_circular() {
        let proj = rule("p", "f($x) -> $x");
        assert!(classify_rule(&proj.rule).collapsing);
        let step = apply(&g("h(f(a))"), NodeId(1), &proj).unwrap();
        assert_eq!(step.after, g("h(a)"));
        let circ = rule("c", "f(%m:f($x)) -> %m");
        let loop_ = g("%k:f(%k)");
        assert!(is_circular_redex(&circ.rule, &loop_, NodeId(0)).unwrap());
        assert_eq!(apply(&loop_, NodeId(0), &circ).unwrap().after, loop_);
        assert!(!is_circular_redex(&proj.rule, &g("f(a)"), NodeId(0)).unwrap());
    }

    #[test]
    fn collapsing_onto_a_kept_node() {
        let s = apply(&g("h(f(a,%m:b),%m)"), NodeId(1), &rule("r", "f($x,$y) -> $y")).unwrap();
        assert_eq!(s.after, g("h(%m:b,%m)"));
        assert!(s.reduct_in_context);
        assert_eq!(s.context, g("h(bot,b)"));
        let v = step_violations(&s, 4);
        assert_eq!(v.len(), 2, "{v:?}");
        assert!(crate::order::le_bot(&s.context, &s.after));

        let s = apply(&g("h(f(a,b),c)"), NodeId(1), &rule("r", "f($x,$y) -> $y")).unwrap();
        assert!(!s.reduct_in_context);
        assert!(step_violations(&s, 4).is_empty());
    }

    #[test]
    fn not_applicable() {
        let rho1 = rule("rho1", "cons(a,$x) -> cons(b,cons(a,$x))");
        assert_eq!(apply(&g("cons(b,c)"), NodeId(0), &rho1), Err(Error::NotApplicable));
    }

    #[test]
    fn nonlinear_lhs_needs_sharing() {
        let r = rule("r", "f($x,$x) -> $x");
        assert!(!classify_rule(&r.rule).left_linear);
        assert!(match_at(&r.rule, &g("f(a,a)"), NodeId(0)).is_none());
        assert!(match_at(&r.rule, &g("f(%n:a,%n)"), NodeId(0)).is_some());
    }

    #[test]
    fn redex_order_and_disjointness() {
        let rho1 = rule("rho1", "cons(a,$x) -> cons(b,cons(a,$x))");
        let grs = Grs::new(Signature::new(), vec![rho1.clone()]);
        let t = g("cons(a,cons(a,c))");
        assert_eq!(find_redexes(&grs, &t), vec![(0, NodeId(0)), (0, NodeId(2))]);
        assert!(disjoint_redexes(&t, (&rho1.rule, NodeId(0)), (&rho1.rule, NodeId(2))).unwrap());
        let deep = rule("deep", "cons(a,cons($y,$x)) -> c");
        assert!(!disjoint_redexes(&t, (&deep.rule, NodeId(0)), (&rho1.rule, NodeId(2))).unwrap());
    }

    #[test]
    fn local_truncation_drops_below() {
        let t = g("f(h(a),%n:b)");
        assert_eq!(local_truncate(&t, &[NodeId(1)]), g("f(bot,b)"));
    }
}
