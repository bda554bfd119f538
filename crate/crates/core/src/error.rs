use thiserror::Error;

#[derive(Debug, Error)]
pub enum QlatError {
    #[error("operator is not Hermitian: |M[{row},{col}] - conj(M[{col},{row}])| = {asymmetry:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        asymmetry: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension must be positive")]
    EmptyDimension,

    #[error("state vector is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator is not a projection (idempotence residual {residual:e})")]
    NotProjection { residual: f64 },

    #[error("expected an atom (rank-1 projection), found rank {rank}")]
    NotAtom { rank: usize },

    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    #[error("unknown property label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate property label `{0}`")]
    DuplicateLabel(String),

    #[error("statement parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = QlatError> = std::result::Result<T, E>;
