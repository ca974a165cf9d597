use thiserror::Error;

/// Errors surfaced by the solver.
///
/// `Capacity` marks inputs that exceed an explicit enumeration budget (the
/// caller can raise the cap); everything else is either malformed input or a
/// violated internal invariant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge {edge} has endpoint {vertex} outside 0..{vertex_count}")]
    BadEndpoint {
        edge: usize,
        vertex: usize,
        vertex_count: usize,
    },

    #[error("rotation at vertex {vertex}: {msg}")]
    BadRotation { vertex: usize, msg: String },

    #[error("required forest edges contain a cycle (offending edges {edges:?})")]
    RequiredCycle { edges: Vec<usize> },

    #[error("{what} needs {needed} items, over the cap of {cap}")]
    Capacity {
        what: &'static str,
        needed: String,
        cap: u64,
    },

    #[error("no weight given for edge {edge}")]
    MissingWeight { edge: usize },

    #[error("weight for edge {edge} is invalid: {msg}")]
    BadWeight { edge: usize, msg: String },

    #[error("edge set is not even: vertex {vertex} has odd degree in it")]
    OddVertex { vertex: usize },

    #[error("not a perfect matching: {msg}")]
    NotPerfectMatching { msg: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code the command line maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } => 3,
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}
