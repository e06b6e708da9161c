//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {index}: non-positive weight {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("edge {index}: self-loop at node {node} is not supported")]
    SelfLoop { index: usize, node: usize },

    #[error("edge {index}: endpoint {node} out of range (node count {n})")]
    NodeOutOfRange { index: usize, node: usize, n: usize },

    #[error("operation requires an undirected graph")]
    DirectedInput,

    #[error("operation requires an unweighted graph (all weights exactly 1)")]
    WeightedInput,

    #[error("operation requires a connected graph")]
    Disconnected,

    #[error("matrix is not symmetric (max |M - M^T| entry {max_dev:.3e} exceeds {tolerance:.1e})")]
    Asymmetric { max_dev: f64, tolerance: f64 },

    #[error("parameter `{name}` out of range: {value}")]
    ParamOutOfRange { name: &'static str, value: f64 },

    #[error("vector length {got} does not match edge count {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("edge index {index} out of range (edge count {m})")]
    EdgeOutOfRange { index: usize, m: usize },

    #[error("{what} limited to {limit} {unit}, got {got}")]
    OracleLimit {
        what: &'static str,
        limit: usize,
        unit: &'static str,
        got: usize,
    },

    #[error("graph has no spectral gap (no nonzero eigenvalue)")]
    NoSpectralGap,

    #[error(
        "edge Katz did not converge: the defining recurrence diverges unless \
         alpha * spectral_radius(A) < 1 ({detail})"
    )]
    KatzDivergence { detail: String },

    #[error("edge {index} ({tail}, {head}): {reason}")]
    EdgeUndefined {
        index: usize,
        tail: usize,
        head: usize,
        reason: &'static str,
    },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("sample count must be at least 1")]
    EmptySample,

    #[error("weights for sampling must be non-negative with a positive sum")]
    BadSampleWeights,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
