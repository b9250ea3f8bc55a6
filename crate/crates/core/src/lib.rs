//! Term graphs with sharing and cycles, the ⊥-homomorphism order, the
//! truncation metrics, graph rewriting, and convergence analysis of finite
//! windows of infinitary reductions.
//!
//! ```
//! use termgraph::{apply, parse_rule, NamedRule, NodeId, Signature, TermGraph};
//!
//! let rule = NamedRule {
//!     name: "r".into(),
//!     rule: parse_rule("%n:cons(a,$x) -> cons(b,%n)", &mut Signature::new()).unwrap(),
//! };
//! let g: TermGraph = "cons(a,c)".parse().unwrap();
//! let step = apply(&g, NodeId(0), &rule).unwrap();
//! assert_eq!(step.after.to_string(), "%n0:cons(b,%n0)");
//! ```

pub mod convergence;
pub mod error;
pub mod families;
pub mod graph;
pub mod metric;
pub mod notation;
pub mod order;
pub mod rewrite;
pub mod unravel;

pub use convergence::{
    analyze_m, analyze_p, analyze_weak, detect_cycle, run, Continuation, InnermostFirst, MReport, OutermostFirst,
    PReport, RoundRobin, Scripted, Strategy, Trace, WeakReport,
};
pub use error::{Error, Result};
pub use graph::{
    find_delta_hom, is_isomorphic, quotient_slice, Node, NodeId, Position, QuotientTreeSlice, Signature, Symbol,
    TermGraph,
};
pub use metric::{
    cauchy_window, distance, metric_limit_window, similarity, truncate, Depth, Distance, Similarity, TruncationVariant,
};
pub use notation::{parse_graph, parse_grs, parse_rule, print_graph, print_rule};
pub use order::{glb, le_bot, liminf, liminf_window, lub_directed};
pub use rewrite::{
    apply, classify_rule, disjoint_redexes, find_redexes, is_circular_redex, local_truncate, match_at, step_violations,
    Grs, NamedRule, Rule, Step,
};
pub use unravel::{bisimilar, check_step_soundness, minimize, unravel_to_depth, Soundness, Term};
