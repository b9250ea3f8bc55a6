use thiserror::Error;

use crate::graph::{NodeId, Position};

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node {node} labelled `{symbol}` has {found} successors but the symbol has arity {expected}")]
    ArityMismatch { node: NodeId, symbol: String, expected: usize, found: usize },
    #[error("`{symbol}` applied to {found} arguments at offset {offset}, but its arity is {expected}")]
    ArityConflict { symbol: String, expected: usize, found: usize, offset: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("node {0} does not exist")]
    InvalidNode(NodeId),
    #[error("no node at position {0}")]
    InvalidPosition(Position),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("name `{0}` is bound twice")]
    DuplicateName(String),
    #[error("name `{0}` is never bound")]
    UnboundName(String),
    #[error("the left-hand side of a rule must not be a variable")]
    LhsRootIsVariable,
    #[error("variable `{0}` does not occur in the left-hand side")]
    VariableNotInLhs(String),
    #[error("empty input")]
    EmptyInput,
    #[error("the graphs do not form a directed set")]
    NotDirected,
    #[error("the rule does not match at the given node")]
    NotApplicable,
    #[error("the rule is not left-linear")]
    NotLeftLinear,
    #[error("the strategy chose a pair that is not a redex")]
    StrategyReturnedNonRedex,
    #[error("no rule named `{0}`")]
    UnknownRule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
