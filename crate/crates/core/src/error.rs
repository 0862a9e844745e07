use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node {node} out of range 1..={n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("weight {value} on node {node} is below 1")]
    WeightBelowOne { node: usize, value: f64 },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("diagonal coefficient {0} outside [0, 1]")]
    DiagOutOfRange(f64),
    #[error("node subset is empty")]
    EmptySubset,
    #[error("vector length {got} does not match network size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("strategy is not on the simplex: {0}")]
    NotOnSimplex(String),
    #[error("network has {n} nodes, above the enumeration limit of {max_n}")]
    TooLarge { n: usize, max_n: usize },
    #[error("support precondition failed: {0}")]
    Precondition(String),
    #[error("strategy is not a certified Nash equilibrium (eq_residual {eq_residual:e}, ineq_slack {ineq_slack:e})")]
    NotNash { eq_residual: f64, ineq_slack: f64 },
    #[error("structural classification does not apply: {0}")]
    StructuralNotApplicable(String),
    #[error("no witness exists: {0}")]
    NoWitness(String),
    #[error("trajectory did not converge")]
    NotConverged,
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
