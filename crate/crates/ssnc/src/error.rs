use thiserror::Error;

/// Errors shared by the digraph substrate and the checkers built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    /// Oriented graphs admit at most one arc per vertex pair.
    #[error("two-cycle between vertices {0} and {1}")]
    TwoCycle(usize, usize),

    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },

    #[error("operation undefined on an empty digraph")]
    EmptyGraph,

    #[error("digraph too large: {n} vertices exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("bad parameter: {0}")]
    BadParam(String),

    /// A lemma checker was invoked on input that fails its hypothesis.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}
