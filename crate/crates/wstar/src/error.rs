use thiserror::Error;

/// Errors produced by constructions and verifications in this crate.
#[derive(Debug, Error)]
pub enum WStarError {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },

    #[error("state is not faithful on the algebra: Gram min eigenvalue {min_eig:.3e}")]
    NotFaithful { min_eig: f64 },

    #[error("state is not normalized: trace {trace:.6} (|trace - 1| > {tol:.1e})")]
    NotNormalized { trace: f64, tol: f64 },

    #[error("element is not contained in the algebra span: residual {residual:.3e}")]
    NotInSpan { residual: f64 },

    #[error("subalgebra is not contained in the host algebra: residual {residual:.3e}")]
    ContainmentFailed { residual: f64 },

    #[error(
        "subalgebra is not invariant under the modular group (no state-preserving conditional \
         expectation exists): invariance residual {residual:.3e}"
    )]
    NotModularInvariant { residual: f64 },

    #[error("group action is invalid: {0}")]
    InvalidAction(String),

    #[error("embedding is invalid: {0}")]
    InvalidEmbedding(String),

    #[error("operation requires an abelian group: {0}")]
    NonAbelianGroup(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("span closure did not stabilize within {max_passes} passes (ambient dim {ambient})")]
    SpanClosureOverflow { max_passes: usize, ambient: usize },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("workspace parse error: {0}")]
    Parse(String),

    #[error("dangling reference: {kind} id {id:?} not found")]
    DanglingReference { kind: String, id: String },

    #[error("validation of {kind} {id:?} failed: {source}")]
    Validation {
        kind: String,
        id: String,
        #[source]
        source: Box<WStarError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, WStarError>;
