use thiserror::Error;

/// Errors reported by the solver and its supporting modules.
///
/// Verdicts (SAT/UNSAT) and infeasible branches are values, not errors.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad file contents, out-of-range ids, self-loops.
    #[error("input error: {0}")]
    Input(String),

    /// The graph contains an induced P5, so the algorithm does not apply.
    #[error("graph is not P5-free: induced path {witness:?}")]
    NotP5Free { witness: [usize; 5] },

    /// A structural precondition of the algorithm failed at runtime.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An API contract was broken by the caller.
    #[error("contract violated: {0}")]
    Contract(String),

    /// An internal consistency check failed. Indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),

    /// The configured wall-clock budget ran out.
    #[error("deadline exceeded")]
    Timeout,

    /// The brute-force oracle refused an instance that is too large.
    #[error("oracle refused instance: {0}")]
    OracleRefused(String),

    /// A random generator gave up.
    #[error("generator failed (seed {seed}): {reason}")]
    Generator { seed: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
