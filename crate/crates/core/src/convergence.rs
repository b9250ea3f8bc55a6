//! Running strategies and analysing finite reduction windows for metric,
//! strong partial-order and weak convergence.
//!
//! Convergence is a property of infinite reductions, so every verdict here
//! rests on an explicit assumption about how the observed window would
//! continue (see [`Continuation`]). Certified prefixes are exact under that
//! assumption.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, Position, TermGraph};
use crate::metric::{cauchy_window, metric_limit_window, truncate, Depth, TruncationVariant};
use crate::order::{liminf_window, tail_glbs};
use crate::rewrite::{apply, find_redexes, match_at, Grs, Step};

/// Picks the next redex as `(rule index, node)`, or `None` to stop.
pub trait Strategy {
    fn choose(&mut self, grs: &Grs, g: &TermGraph) -> Result<Option<(usize, NodeId)>>;
}

/// Smallest redex depth first; ties go to the earlier node, then the
/// earlier rule.
pub struct OutermostFirst;

/// Largest redex depth first, with the same tie-breaking.
pub struct InnermostFirst;

fn by_depth(grs: &Grs, g: &TermGraph, outermost: bool) -> Option<(usize, NodeId)> {
    let depths = g.depths();
    find_redexes(grs, g).into_iter().min_by_key(|&(r, n)| {
        let d = depths[n.index()] as isize;
        (if outermost { d } else { -d }, n, r)
    })
}

impl Strategy for OutermostFirst {
    fn choose(&mut self, grs: &Grs, g: &TermGraph) -> Result<Option<(usize, NodeId)>> {
        Ok(by_depth(grs, g, true))
    }
}

impl Strategy for InnermostFirst {
    fn choose(&mut self, grs: &Grs, g: &TermGraph) -> Result<Option<(usize, NodeId)>> {
        Ok(by_depth(grs, g, false))
    }
}

/// Cycles through the rules: step `i` prefers rule `i mod k` at its
/// outermost redex and falls back to the next rule with a redex.
#[derive(Default)]
pub struct RoundRobin {
    next: usize,
}

impl Strategy for RoundRobin {
    fn choose(&mut self, grs: &Grs, g: &TermGraph) -> Result<Option<(usize, NodeId)>> {
        let k = grs.rules().len();
        let depths = g.depths();
        let redexes = find_redexes(grs, g);
        for j in 0..k {
            let r = (self.next + j) % k;
            if let Some(&(_, n)) = redexes.iter().filter(|(q, _)| *q == r).min_by_key(|&&(_, n)| (depths[n.index()], n))
            {
                self.next = r + 1;
                return Ok(Some((r, n)));
            }
        }
        Ok(None)
    }
}

/// Follows a fixed list of `(rule name, position)` choices, then stops.
pub struct Scripted {
    script: Vec<(String, Position)>,
    next: usize,
}

impl Scripted {
    pub fn new(script: Vec<(String, Position)>) -> Scripted {
        Scripted { script, next: 0 }
    }
}

impl Strategy for Scripted {
    fn choose(&mut self, grs: &Grs, g: &TermGraph) -> Result<Option<(usize, NodeId)>> {
        let Some((name, pos)) = self.script.get(self.next) else {
            return Ok(None);
        };
        self.next += 1;
        let rule = grs.rule_index(name)?;
        let node = g.node_at(pos).map_err(|_| Error::StrategyReturnedNonRedex)?;
        Ok(Some((rule, node)))
    }
}

impl<F> Strategy for F
where
    F: FnMut(&Grs, &TermGraph) -> Option<(usize, NodeId)>,
{
    fn choose(&mut self, grs: &Grs, g: &TermGraph) -> Result<Option<(usize, NodeId)>> {
        Ok(self(grs, g))
    }
}

/// A finite reduction: the initial graph and its steps.
#[derive(Clone, Debug)]
pub struct Trace {
    pub initial: TermGraph,
    pub steps: Vec<Step>,
    /// True if the last graph has no redex.
    pub exhausted: bool,
}

impl Trace {
    /// `g_0, ..., g_n`.
    pub fn graphs(&self) -> Vec<TermGraph> {
        std::iter::once(self.initial.clone()).chain(self.steps.iter().map(|s| s.after.clone())).collect()
    }

    pub fn last(&self) -> &TermGraph {
        self.steps.last().map(|s| &s.after).unwrap_or(&self.initial)
    }

    pub fn depths(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.redex_depth).collect()
    }

    pub fn contexts(&self) -> Vec<TermGraph> {
        self.steps.iter().map(|s| s.context.clone()).collect()
    }
}

/// Runs `strategy` for at most `max_steps` steps.
pub fn run(grs: &Grs, g0: &TermGraph, strategy: &mut dyn Strategy, max_steps: usize) -> Result<Trace> {
    let initial = g0.canonicalize();
    let mut steps: Vec<Step> = Vec::new();
    let mut current = initial.clone();
    while steps.len() < max_steps {
        let Some((r, n)) = strategy.choose(grs, &current)? else {
            break;
        };
        let rule = grs.rules().get(r).ok_or(Error::StrategyReturnedNonRedex)?;
        if !current.contains(n) || match_at(&rule.rule, &current, n).is_none() {
            return Err(Error::StrategyReturnedNonRedex);
        }
        let step = apply(&current, n, rule)?;
        current = step.after.clone();
        steps.push(step);
    }
    let exhausted = find_redexes(grs, &current).is_empty();
    Ok(Trace { initial, steps, exhausted })
}

/// How the analysers assume the observed window continues.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Continuation {
    /// The reduction ended: a normal form was reached, or there are no
    /// steps. Its limit is the last graph.
    Closed,
    /// The step sequence repeats with this period from `start` on.
    Periodic { start: usize, period: usize },
    /// Steps from index `from` (the final quarter) are representative:
    /// positions contracted there are contracted forever, others never
    /// again.
    Tail { from: usize },
}

impl Continuation {
    pub fn of(trace: &Trace) -> Continuation {
        if trace.exhausted || trace.steps.is_empty() {
            Continuation::Closed
        } else if let Some((start, period)) = detect_cycle(trace) {
            Continuation::Periodic { start, period }
        } else {
            Continuation::Tail { from: 3 * trace.steps.len() / 4 }
        }
    }

    fn observed_from(self, len: usize) -> usize {
        match self {
            Continuation::Closed => len,
            Continuation::Periodic { start, .. } => start,
            Continuation::Tail { from } => from,
        }
    }
}

/// Least `(start, period)`, ordered by start, such that the sequence of
/// (graph, rule, redex) from `start` on has that period and shows at least
/// two full periods.
pub fn detect_cycle(trace: &Trace) -> Option<(usize, usize)> {
    let mut ids: HashMap<(&TermGraph, &str, NodeId), usize> = HashMap::new();
    let seq: Vec<usize> = trace
        .steps
        .iter()
        .map(|s| {
            let next = ids.len();
            *ids.entry((&s.before, s.rule.as_str(), s.redex)).or_insert(next)
        })
        .collect();
    let n = seq.len();
    for start in 0..n {
        for period in 1..=(n - start) / 2 {
            if (start..n - period).all(|i| seq[i] == seq[i + period]) {
                return Some((start, period));
            }
        }
    }
    None
}

// hits[i]: positions of length ≤ d of the node contracted in step i
fn redex_positions(trace: &Trace, d: usize) -> Vec<BTreeSet<Position>> {
    trace.steps.iter().map(|s| s.before.positions_of(s.redex, d).into_iter().collect()).collect()
}

struct Window {
    continuation: Continuation,
    // positions contracted in the observed part
    recurrent: BTreeSet<Position>,
    // least index after which only recurrent positions are contracted
    stable_from: usize,
}

fn window(trace: &Trace, hits: &[BTreeSet<Position>]) -> Window {
    let continuation = Continuation::of(trace);
    let len = trace.steps.len();
    let from = continuation.observed_from(len);
    let recurrent: BTreeSet<Position> = hits[from..].iter().flatten().cloned().collect();
    let stable_from = (0..from).rev().find(|&i| !hits[i].is_subset(&recurrent)).map_or(0, |i| i + 1);
    Window { continuation, recurrent, stable_from }
}

#[derive(Clone, Debug, Serialize)]
pub struct MReport {
    pub depth_bound: usize,
    pub continuation: Continuation,
    pub depths: Vec<usize>,
    /// First index from which the window's depth-`d` truncations agree.
    pub cauchy_from: Option<usize>,
    /// Least index from which every observed step is deeper than `d`.
    pub deep_from: Option<usize>,
    pub certified_from: Option<usize>,
    #[serde(serialize_with = "ser_opt_graph")]
    pub certified_prefix: Option<TermGraph>,
    /// A shortest position of the latest step at depth at most `d`.
    pub diverging_at: Option<Position>,
}

/// Metric analysis at depth `d`.
///
/// Certifies `trunc_d` of the limit when, under the continuation
/// assumption, no step from some index on reaches depth `d`.
pub fn analyze_m(trace: &Trace, d: usize) -> MReport {
    let graphs = trace.graphs();
    let depths = trace.depths();
    let len = depths.len();
    let mut deep_from = len;
    while deep_from > 0 && depths[deep_from - 1] > d {
        deep_from -= 1;
    }
    let deep_from = (len == 0 || deep_from < len).then_some(deep_from);
    let hits = redex_positions(trace, d);
    let w = window(trace, &hits);
    let cut = |g: &TermGraph| truncate(g, Depth::Finite(d), TruncationVariant::Strict);

    let certified_from = match w.continuation {
        Continuation::Closed => Some(len),
        _ if w.recurrent.is_empty() => Some(w.stable_from),
        _ => None,
    };
    let certified_prefix = certified_from.map(|b| {
        let prefix = cut(&graphs[b]);
        debug_assert!(graphs[b..].iter().all(|g| cut(g) == prefix), "deep steps changed the prefix");
        prefix
    });
    let diverging_at = match certified_from {
        Some(_) => None,
        None => trace
            .steps
            .iter()
            .rev()
            .find(|s| s.redex_depth <= d)
            .and_then(|s| s.before.positions_of(s.redex, d).into_iter().min_by_key(|p| (p.len(), p.clone()))),
    };
    MReport {
        depth_bound: d,
        continuation: w.continuation,
        cauchy_from: cauchy_window(&graphs, d, TruncationVariant::Strict),
        depths,
        deep_from,
        certified_from,
        certified_prefix,
        diverging_at,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PReport {
    pub depth_bound: usize,
    pub continuation: Continuation,
    /// Index from which only recurrent positions are contracted.
    pub stable_from: usize,
    /// `trunc_d` of the limit inferior of the contexts from `stable_from`.
    #[serde(serialize_with = "ser_graph")]
    pub certified_prefix: TermGraph,
    /// Outermost contracted positions, which are ⊥ in the prefix.
    pub volatile: Vec<Position>,
    /// Positions of length at most `d` contracted at two or more indices,
    /// one of them in the final quarter. Exact for periodic windows.
    pub volatile_candidates: Vec<Position>,
    /// No volatile position and no ⊥ above depth `d`.
    pub total: bool,
}

/// Strong partial-order analysis at depth `d`.
///
/// The prefix keeps the positions none of whose proper prefixes is
/// contracted after the stabilisation index, and is ⊥ at contracted ones.
pub fn analyze_p(trace: &Trace, d: usize) -> PReport {
    let len = trace.steps.len();
    let hits = redex_positions(trace, d);
    let w = window(trace, &hits);
    let cut = |g: &TermGraph| truncate(g, Depth::Finite(d), TruncationVariant::Strict);

    let certified_prefix = match w.continuation {
        Continuation::Closed => cut(trace.last()),
        _ => cut(&tail_glbs(&trace.contexts()[w.stable_from..])[0]),
    };
    let volatile: Vec<Position> =
        w.recurrent.iter().filter(|p| !w.recurrent.iter().any(|q| q.is_proper_prefix_of(p))).cloned().collect();
    let volatile_candidates = match w.continuation {
        Continuation::Closed => Vec::new(),
        Continuation::Periodic { .. } => w.recurrent.iter().cloned().collect(),
        Continuation::Tail { from } => {
            let mut seen: BTreeMap<&Position, Vec<usize>> = BTreeMap::new();
            for (i, h) in hits.iter().enumerate() {
                for p in h {
                    seen.entry(p).or_default().push(i);
                }
            }
            seen.into_iter()
                .filter(|(_, at)| at.len() >= 2 && at.iter().any(|&i| i >= from))
                .map(|(p, _)| p.clone())
                .collect()
        }
    };
    let depths = certified_prefix.depths();
    let shallow_bot = certified_prefix.node_ids().any(|n| certified_prefix.label(n).is_bot() && depths[n.index()] < d);
    debug_assert!(len > 0 || volatile.is_empty());
    PReport {
        depth_bound: d,
        continuation: w.continuation,
        stable_from: w.stable_from,
        total: volatile.is_empty() && !shallow_bot,
        certified_prefix,
        volatile,
        volatile_candidates,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakReport {
    pub depth_bound: usize,
    #[serde(serialize_with = "ser_opt_graph")]
    pub m_window: Option<TermGraph>,
    #[serde(serialize_with = "ser_graph")]
    pub p_window: TermGraph,
    pub p_stable: bool,
}

/// Weak convergence: limits of the graphs themselves, ignoring where the
/// steps happen.
pub fn analyze_weak(trace: &Trace, d: usize) -> WeakReport {
    let graphs = trace.graphs();
    let (p_window, p_stable) = liminf_window(&graphs, d).expect("a trace has at least one graph");
    WeakReport { depth_bound: d, m_window: metric_limit_window(&graphs, d), p_window, p_stable }
}

fn ser_graph<S: serde::Serializer>(g: &TermGraph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

fn ser_opt_graph<S: serde::Serializer>(g: &Option<TermGraph>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match g {
        Some(g) => s.serialize_some(&g.to_string()),
        None => s.serialize_none(),
    }
}
