//! Seeded random graphs, rules and traces shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use termgraph::{find_redexes, run, Grs, NamedRule, Node, NodeId, Rule, Signature, Symbol, TermGraph, Trace};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const SYMBOLS: [(&str, usize); 6] = [("f", 2), ("h", 2), ("a", 0), ("b", 0), ("c", 0), ("", 0)];

fn symbol(name: &str) -> Symbol {
    if name.is_empty() {
        Symbol::Bot
    } else {
        Symbol::fun(name)
    }
}

/// A canonical graph with at most `max_nodes` nodes over
/// `f/2, h/2, a, b, c, ⊥`.
pub fn graph(rng: &mut TestRng, max_nodes: usize) -> TermGraph {
    graph_over(rng, max_nodes, SYMBOLS.len())
}

/// Like [`graph`], without ⊥.
pub fn total_graph(rng: &mut TestRng, max_nodes: usize) -> TermGraph {
    graph_over(rng, max_nodes, SYMBOLS.len() - 1)
}

fn graph_over(rng: &mut TestRng, max_nodes: usize, symbols: usize) -> TermGraph {
    let n = rng.gen_range(1..=max_nodes);
    let nodes = (0..n)
        .map(|_| {
            let (name, arity) = SYMBOLS[rng.gen_range(0..symbols)];
            Node::new(symbol(name), (0..arity).map(|_| NodeId(rng.gen_range(0..n) as u32)).collect())
        })
        .collect();
    TermGraph::new(nodes, NodeId(0)).expect("arities are respected").canonicalize()
}

/// Relabels one node with a symbol of the same arity, or redirects one
/// edge.
pub fn perturb(rng: &mut TestRng, g: &TermGraph) -> TermGraph {
    let mut nodes = g.nodes().to_vec();
    let i = rng.gen_range(0..nodes.len());
    if nodes[i].succ.is_empty() || rng.gen_bool(0.5) {
        let same: Vec<&str> = SYMBOLS.iter().filter(|(_, k)| *k == nodes[i].succ.len()).map(|(s, _)| *s).collect();
        nodes[i].label = symbol(same.choose(rng).unwrap());
    } else {
        let j = rng.gen_range(0..nodes[i].succ.len());
        nodes[i].succ[j] = NodeId(rng.gen_range(0..nodes.len()) as u32);
    }
    TermGraph::new(nodes, g.root()).unwrap().canonicalize()
}

/// A graph close to `g`: `g` itself, a perturbation, or a fresh graph.
pub fn neighbour(rng: &mut TestRng, g: &TermGraph, max_nodes: usize) -> TermGraph {
    match rng.gen_range(0..4) {
        0 => g.clone(),
        1 | 2 => perturb(rng, g),
        _ => graph(rng, max_nodes),
    }
}

/// A random permutation of the node numbering, root included.
pub fn shuffle(rng: &mut TestRng, g: &TermGraph) -> TermGraph {
    let mut perm: Vec<usize> = (0..g.len()).collect();
    perm.shuffle(rng);
    g.permuted(&perm)
}

/// A left-linear rule whose left-hand side is `g` unrolled from `n`, cut by
/// variables, so it matches at `n`. `None` if `n` is labelled ⊥.
pub fn rule_at(rng: &mut TestRng, g: &TermGraph, n: NodeId, name: &str) -> Option<NamedRule> {
    if g.label(n).is_bot() {
        return None;
    }
    let height = rng.gen_range(1..=2);
    let mut nodes: Vec<Node> = Vec::new();
    let mut vars = 0;
    unroll(rng, g, n, height, true, &mut nodes, &mut vars);
    let lhs = nodes.len();
    let fresh = rng.gen_range(0..=3);
    let names = ["f", "h", "a", "b", "c"];
    for _ in 0..fresh {
        let name = names.choose(rng).unwrap();
        let arity = if *name == "f" || *name == "h" { 2 } else { 0 };
        let total = lhs + fresh;
        nodes.push(Node::new(Symbol::fun(name), (0..arity).map(|_| NodeId(rng.gen_range(0..total) as u32)).collect()));
    }
    let rhs_root = if fresh > 0 && rng.gen_bool(0.75) { lhs + rng.gen_range(0..fresh) } else { rng.gen_range(0..lhs) };
    let rule = Rule::new(nodes, NodeId(0), NodeId(rhs_root as u32)).ok()?;
    Some(NamedRule { name: name.to_string(), rule })
}

fn unroll(
    rng: &mut TestRng,
    g: &TermGraph,
    n: NodeId,
    left: usize,
    top: bool,
    nodes: &mut Vec<Node>,
    vars: &mut usize,
) -> NodeId {
    let id = NodeId(nodes.len() as u32);
    let cut = !top && (left == 0 || g.label(n).is_bot() || rng.gen_bool(0.3));
    if cut {
        nodes.push(Node::leaf(Symbol::var(&format!("x{vars}"))));
        *vars += 1;
        return id;
    }
    nodes.push(Node::leaf(g.label(n).clone()));
    let succ: Vec<NodeId> =
        g.succ(n).to_vec().into_iter().map(|s| unroll(rng, g, s, left.saturating_sub(1), false, nodes, vars)).collect();
    nodes[id.index()].succ = succ;
    id
}

/// A graph together with a rule that has a redex in it.
pub fn redex(rng: &mut TestRng, max_nodes: usize) -> (TermGraph, NodeId, NamedRule) {
    redex_over(rng, max_nodes, false)
}

fn redex_over(rng: &mut TestRng, max_nodes: usize, total: bool) -> (TermGraph, NodeId, NamedRule) {
    loop {
        let g = if total { total_graph(rng, max_nodes) } else { graph(rng, max_nodes) };
        let n = NodeId(rng.gen_range(0..g.len()) as u32);
        if let Some(r) = rule_at(rng, &g, n, "r") {
            return (g, n, r);
        }
    }
}

/// A system of one or two random left-linear rules, a start graph with a
/// redex, and a trace of at most `max_steps` steps under a seeded random
/// choice of redexes. With `total`, no ⊥ occurs anywhere.
pub fn trace(rng: &mut TestRng, max_steps: usize, total: bool) -> (Grs, Trace) {
    let (g, _, first) = redex_over(rng, 5, total);
    let mut rules = vec![first];
    if rng.gen_bool(0.5) {
        let h = if total { total_graph(rng, 5) } else { graph(rng, 5) };
        let n = NodeId(rng.gen_range(0..h.len()) as u32);
        if let Some(r) = rule_at(rng, &h, n, "s") {
            rules.push(r);
        }
    }
    let grs = Grs::new(Signature::new(), rules);
    let steps = rng.gen_range(1..=max_steps);
    let mut pick = ChaCha8Rng::seed_from_u64(rng.gen());
    let outermost = rng.gen_bool(0.5);
    let mut choose = move |grs: &Grs, g: &TermGraph| {
        let mut rs = find_redexes(grs, g);
        if rs.is_empty() {
            return None;
        }
        if outermost {
            let depths = g.depths();
            let min = rs.iter().map(|&(_, n)| depths[n.index()]).min().unwrap();
            rs.retain(|&(_, n)| depths[n.index()] == min);
        }
        rs.choose(&mut pick).copied()
    };
    let t = run(&grs, &g, &mut choose, steps).expect("strategy only picks redexes");
    (grs, t)
}

/// Canonical graphs over `f/2, a, ⊥` with at most `max_nodes` nodes.
pub fn enumerate_small(max_nodes: usize) -> Vec<TermGraph> {
    let labels = [("f", 2), ("a", 0), ("", 0)];
    let mut out = std::collections::BTreeSet::new();
    for n in 1..=max_nodes {
        let mut shape = vec![0usize; n];
        loop {
            let fs: Vec<usize> = (0..n).filter(|&i| labels[shape[i]].1 == 2).collect();
            let choices = n.pow(2 * fs.len() as u32);
            for c in 0..choices {
                let mut c = c;
                let mut nodes: Vec<Node> = shape.iter().map(|&l| Node::leaf(symbol(labels[l].0))).collect();
                for &i in &fs {
                    let a = c % n;
                    c /= n;
                    let b = c % n;
                    c /= n;
                    nodes[i].succ = vec![NodeId(a as u32), NodeId(b as u32)];
                }
                let g = TermGraph::new(nodes, NodeId(0)).unwrap();
                if g.len() == n {
                    out.insert(g.canonicalize().to_string());
                }
            }
            // next label assignment
            let mut k = 0;
            while k < n && shape[k] == labels.len() - 1 {
                shape[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            shape[k] += 1;
        }
    }
    out.into_iter().map(|s| s.parse().unwrap()).collect()
}
