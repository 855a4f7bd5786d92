use thiserror::Error;

/// Errors shared across the solver modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input exceeded a size guard (caps exist because several
    /// routines are exponential by design).
    #[error("size guard exceeded in {what}: {actual} > limit {limit}")]
    SizeGuard {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    /// Checked arithmetic overflowed.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A coloring does not cover the graph it is checked against.
    #[error("coloring domain mismatch: {0}")]
    ColoringDomain(String),

    /// A decomposition failed validation where a valid one was required.
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    /// Malformed input (bad parameters, not a permutation, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The clique-width DP outgrew its attained-signature budget.
    #[error(
        "cw solver guard exceeded at node {node}: {signatures} attained signatures > limit {limit}"
    )]
    CwSignatureGuard {
        node: usize,
        signatures: usize,
        limit: usize,
    },

    /// An internal consistency check failed; indicates a bug.
    #[error("internal consistency error: {0}")]
    Inconsistency(String),
}
