//! Unravelling term graphs into (finite slices of) terms, bisimilarity,
//! and a term-level oracle for checking graph rewrite steps.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{is_acyclic_from, Node, NodeId, Symbol, TermGraph};
use crate::rewrite::{apply, find_redexes, is_circular_redex, match_at, Grs, NamedRule, Rule};

/// A finite term. Variables and ⊥ are nullary symbols.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub symbol: Symbol,
    pub args: Vec<Term>,
}

impl Term {
    pub fn leaf(symbol: Symbol) -> Term {
        Term { symbol, args: Vec::new() }
    }

    pub fn to_graph(&self) -> TermGraph {
        fn go(t: &Term, nodes: &mut Vec<Node>) -> NodeId {
            let id = NodeId::from(nodes.len());
            nodes.push(Node::leaf(t.symbol.clone()));
            let succ = t.args.iter().map(|a| go(a, nodes)).collect();
            nodes[id.index()].succ = succ;
            id
        }
        let mut nodes = Vec::new();
        go(self, &mut nodes);
        TermGraph::new(nodes, NodeId(0)).expect("a term is a valid graph")
    }

    pub fn height(&self) -> usize {
        self.args.iter().map(|a| a.height() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn unravel_nodes(nodes: &[Node], n: NodeId, depth_left: usize) -> Term {
    if depth_left == 0 {
        return Term::leaf(Symbol::Bot);
    }
    let node = &nodes[n.index()];
    Term {
        symbol: node.label.clone(),
        args: node.succ.iter().map(|&s| unravel_nodes(nodes, s, depth_left - 1)).collect(),
    }
}

/// The unravelling of `g` cut strictly at depth `d`: positions of length
/// `d` become ⊥.
pub fn unravel_to_depth(g: &TermGraph, d: usize) -> Term {
    unravel_nodes(g.nodes(), g.root(), d)
}

fn refine(nodes: &[Node]) -> Vec<usize> {
    let mut ids: HashMap<(&Symbol, usize), usize> = HashMap::new();
    let mut class: Vec<usize> = nodes
        .iter()
        .map(|n| {
            let k = ids.len();
            *ids.entry((&n.label, n.succ.len())).or_insert(k)
        })
        .collect();
    let mut count = ids.len();
    loop {
        let mut keys: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let key = (class[i], n.succ.iter().map(|s| class[s.index()]).collect());
                let k = keys.len();
                *keys.entry(key).or_insert(k)
            })
            .collect();
        class = next;
        if keys.len() == count {
            return class;
        }
        count = keys.len();
    }
}

/// Two graphs are bisimilar iff they have the same unravelling.
pub fn bisimilar(g: &TermGraph, h: &TermGraph) -> bool {
    let offset = g.len() as u32;
    let mut nodes: Vec<Node> = g.nodes().to_vec();
    nodes.extend(
        h.nodes()
            .iter()
            .map(|n| Node { label: n.label.clone(), succ: n.succ.iter().map(|s| NodeId(s.0 + offset)).collect() }),
    );
    let class = refine(&nodes);
    class[g.root().index()] == class[h.root().index() + g.len()]
}

/// The least graph with the same unravelling: the quotient by the
/// coarsest bisimulation.
pub fn minimize(g: &TermGraph) -> TermGraph {
    let class = refine(g.nodes());
    let k = class.iter().max().map_or(0, |m| m + 1);
    let mut nodes: Vec<Option<Node>> = vec![None; k];
    for (i, n) in g.nodes().iter().enumerate() {
        nodes[class[i]].get_or_insert_with(|| Node {
            label: n.label.clone(),
            succ: n.succ.iter().map(|s| NodeId::from(class[s.index()])).collect(),
        });
    }
    let nodes = nodes.into_iter().map(Option::unwrap).collect();
    TermGraph::new(nodes, NodeId::from(class[g.root().index()])).unwrap().canonicalize()
}

/// Right-hand side of an unravelled rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum UnravelledRhs {
    Finite(Term),
    /// A cyclic right-hand side, kept as its graph; its unravelling is an
    /// infinite rational term.
    Rational(TermGraph),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnravelledRule {
    pub lhs: Term,
    pub rhs: UnravelledRhs,
}

pub fn unravel_rule(rule: &Rule) -> Result<UnravelledRule> {
    if !rule.is_left_linear() {
        return Err(Error::NotLeftLinear);
    }
    let lhs = unravel_nodes(rule.nodes(), rule.lhs_root(), usize::MAX);
    let rhs = if is_acyclic_from(rule.nodes(), rule.rhs_root()) {
        UnravelledRhs::Finite(unravel_nodes(rule.nodes(), rule.rhs_root(), usize::MAX))
    } else {
        UnravelledRhs::Rational(rule.rhs())
    };
    Ok(UnravelledRule { lhs, rhs })
}

/// Does the left-linear pattern `pat` match `t` at the root?
pub fn term_matches(pat: &Term, t: &Term) -> bool {
    if pat.symbol.is_var() {
        return true;
    }
    pat.symbol == t.symbol
        && pat.args.len() == t.args.len()
        && pat.args.iter().zip(&t.args).all(|(p, s)| term_matches(p, s))
}

// A term slice whose unexplored parts are `Cut`. Marks flag residuals of
// the occurrences being developed.
#[derive(Clone, Debug)]
enum Slice {
    Cut,
    Node { symbol: Symbol, args: Vec<Slice>, marked: bool },
}

struct TooLarge;

fn materialize(
    g: &TermGraph,
    mark: NodeId,
    n: NodeId,
    depth_left: usize,
    budget: &mut usize,
) -> std::result::Result<Slice, TooLarge> {
    if depth_left == 0 {
        return Ok(Slice::Cut);
    }
    if *budget == 0 {
        return Err(TooLarge);
    }
    *budget -= 1;
    let args = g
        .succ(n)
        .iter()
        .map(|&s| materialize(g, mark, s, depth_left - 1, budget))
        .collect::<std::result::Result<_, _>>()?;
    Ok(Slice::Node { symbol: g.label(n).clone(), args, marked: n == mark })
}

// Outermost, then leftmost, marked position shorter than `d`.
fn outermost_marked(t: &Slice, d: usize) -> Option<Vec<usize>> {
    let mut queue = VecDeque::from([(t, Vec::new())]);
    while let Some((s, p)) = queue.pop_front() {
        if p.len() >= d {
            break;
        }
        if let Slice::Node { args, marked, .. } = s {
            if *marked {
                return Some(p);
            }
            for (i, a) in args.iter().enumerate() {
                let mut q = p.clone();
                q.push(i);
                queue.push_back((a, q));
            }
        }
    }
    None
}

fn at_mut<'a>(t: &'a mut Slice, p: &[usize]) -> &'a mut Slice {
    p.iter().fold(t, |s, &i| match s {
        Slice::Node { args, .. } => &mut args[i],
        Slice::Cut => unreachable!("path leads through a cut"),
    })
}

enum Blocked {
    // the pattern reaches into unexplored territory
    Cut,
    NoMatch,
}

// Binds every left-hand side node, variables included, to the subterm it
// matches. The left-hand side of a left-linear rule is a tree.
fn bind(rule: &Rule, m: NodeId, t: &Slice, env: &mut HashMap<NodeId, Slice>) -> std::result::Result<(), Blocked> {
    let node = &rule.nodes()[m.index()];
    if !node.label.is_var() {
        match t {
            Slice::Cut => return Err(Blocked::Cut),
            Slice::Node { symbol, args, .. } => {
                if *symbol != node.label || args.len() != node.succ.len() {
                    return Err(Blocked::NoMatch);
                }
                node.succ.iter().zip(args).try_for_each(|(&s, a)| bind(rule, s, a, env))?;
            }
        }
    }
    env.insert(m, t.clone());
    Ok(())
}

// Left-hand side nodes reached from the right-hand side are copies of the
// matched subterms, marks included: a copy of an occurrence of the redex
// node is still to be contracted.
fn instantiate(rule: &Rule, n: NodeId, depth_left: usize, env: &HashMap<NodeId, Slice>) -> Slice {
    if rule.in_lhs(n) {
        return env[&n].clone();
    }
    if depth_left == 0 {
        return Slice::Cut;
    }
    let node = &rule.nodes()[n.index()];
    Slice::Node {
        symbol: node.label.clone(),
        args: node.succ.iter().map(|&s| instantiate(rule, s, depth_left - 1, env)).collect(),
        marked: false,
    }
}

fn to_term(t: &Slice, d: usize) -> Option<Term> {
    match t {
        _ if d == 0 => Some(Term::leaf(Symbol::Bot)),
        Slice::Cut => None,
        Slice::Node { symbol, args, .. } => {
            Some(Term { symbol: symbol.clone(), args: args.iter().map(|a| to_term(a, d - 1)).collect::<Option<_>>()? })
        }
    }
}

/// Outcome of the term-level development.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Development {
    /// The developed term cut at depth `d`, or `None` if the budget ran
    /// out or the slice was too large.
    pub result: Option<Term>,
    pub contractions: usize,
    /// Length of the shortest contracted position.
    pub min_depth: Option<usize>,
}

const SLICE_LIMIT: usize = 1 << 18;

/// Contracts, outermost first, the residuals of all occurrences of `n` in
/// the unravelling of `g`, until none is left above depth `d`.
///
/// A circular redex, or a rule with a single root, leaves the term
/// unchanged. `budget` bounds the number of contractions and defaults to
/// four times the number of occurrences and of the reduct above `d`, plus
/// `d`.
pub fn develop_step_oracle(
    g: &TermGraph,
    n: NodeId,
    rule: &Rule,
    d: usize,
    budget: Option<usize>,
) -> Result<Development> {
    if !g.contains(n) {
        return Err(Error::InvalidNode(n));
    }
    match_at(rule, g, n).ok_or(Error::NotApplicable)?;
    unravel_rule(rule)?;
    // a circular redex, or a rule whose two roots coincide, rewrites the
    // graph to itself
    if rule.lhs_root() == rule.rhs_root() || is_circular_redex(rule, g, n)? {
        return Ok(Development { result: Some(unravel_to_depth(g, d)), contractions: 0, min_depth: None });
    }
    let occurrences = g.positions_of(n, d.saturating_sub(1)).len();
    // a complete development contracts one redex per occurrence of the
    // reduct above `d`
    let named = NamedRule { name: String::new(), rule: rule.clone() };
    let step = apply(g, n, &named)?;
    let reducts = step.after.positions_of(step.reduct_root, d.saturating_sub(1)).len();
    let budget = budget.unwrap_or(4 * (occurrences + reducts + d));
    let height = rule.lhs_height();
    let mut margin = height + 1;
    for _ in 0..4 {
        match develop(g, n, rule, d, d + margin, budget) {
            Attempt::Done(dev) => return Ok(dev),
            Attempt::GiveUp(dev) => return Ok(dev),
            Attempt::Deeper => margin = 2 * margin + d,
        }
    }
    Ok(Development { result: None, contractions: 0, min_depth: None })
}

enum Attempt {
    Done(Development),
    GiveUp(Development),
    Deeper,
}

fn develop(g: &TermGraph, n: NodeId, rule: &Rule, d: usize, horizon: usize, budget: usize) -> Attempt {
    let give_up = |contractions, min_depth| Attempt::GiveUp(Development { result: None, contractions, min_depth });
    let mut size = SLICE_LIMIT;
    let Ok(mut t) = materialize(g, n, g.root(), horizon, &mut size) else {
        return give_up(0, None);
    };
    let mut contractions = 0;
    let mut min_depth: Option<usize> = None;
    while let Some(p) = outermost_marked(&t, d) {
        if contractions == budget {
            return give_up(contractions, min_depth);
        }
        let sub = at_mut(&mut t, &p);
        let mut env = HashMap::new();
        match bind(rule, rule.lhs_root(), sub, &mut env) {
            Ok(()) => {}
            Err(Blocked::Cut) => return Attempt::Deeper,
            Err(Blocked::NoMatch) => return give_up(contractions, min_depth),
        }
        *sub = instantiate(rule, rule.rhs_root(), horizon - p.len(), &env);
        contractions += 1;
        min_depth = Some(min_depth.map_or(p.len(), |m| m.min(p.len())));
    }
    match to_term(&t, d) {
        Some(term) => Attempt::Done(Development { result: Some(term), contractions, min_depth }),
        None => Attempt::Deeper,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Soundness {
    Sound,
    Unsound,
    /// The oracle could not finish within its budget.
    Inconclusive,
}

/// Compares a graph step with its term-level development up to depth `d`.
/// Also requires every term-level contraction to happen at or below the
/// depth of the redex.
pub fn check_step_soundness(g: &TermGraph, n: NodeId, rule: &NamedRule, d: usize) -> Result<Soundness> {
    let step = apply(g, n, rule)?;
    let dev = develop_step_oracle(g, n, &rule.rule, d, None)?;
    let Some(term) = dev.result else {
        return Ok(Soundness::Inconclusive);
    };
    let deep_enough = dev.min_depth.is_none_or(|m| m >= g.depth(n));
    Ok(if deep_enough && term == unravel_to_depth(&step.after, d) { Soundness::Sound } else { Soundness::Unsound })
}

/// For a left-linear system: `g` is a normal form iff its unravelling has
/// no redex. Returns whether the two verdicts agree.
pub fn check_normal_form_correspondence(grs: &Grs, g: &TermGraph) -> Result<bool> {
    let lhss = grs.rules().iter().map(|r| unravel_rule(&r.rule).map(|u| u.lhs)).collect::<Result<Vec<_>>>()?;
    let graph_nf = find_redexes(grs, g).is_empty();
    // every node has a position shorter than the node count
    let reach = g.len();
    let height = lhss.iter().map(Term::height).max().unwrap_or(0);
    let slice = unravel_to_depth(g, reach + height + 1);
    let mut term_nf = true;
    let mut stack = vec![(&slice, 0usize)];
    while let Some((t, len)) = stack.pop() {
        if lhss.iter().any(|l| term_matches(l, t)) {
            term_nf = false;
            break;
        }
        if len < reach {
            stack.extend(t.args.iter().map(|a| (a, len + 1)));
        }
    }
    Ok(graph_nf == term_nf)
}
