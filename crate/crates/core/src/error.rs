use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("state is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },

    #[error("state is rank deficient (min eigenvalue {min_eig:.3e})")]
    RankDeficient { min_eig: f64 },

    #[error("singular denominator {denominator:.3e} in sandwich inverse")]
    Singular { denominator: f64 },

    #[error("eigendecomposition did not converge")]
    NonConvergence,

    #[error("parameter {name} = {value} outside admissible range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("monotone {name} has no integral representation; {hint}")]
    UnsupportedMeasure { name: String, hint: &'static str },

    #[error("monotone {name} violates {property} at x = {x}")]
    NotStandard {
        name: String,
        property: &'static str,
        x: f64,
    },

    #[error("unknown monotone or divergence name: {0}")]
    UnknownName(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("trace drift {drift:.3e} exceeds tolerance")]
    TraceDrift { drift: f64 },

    #[error("rate matrix not identifiable from the supplied propagators")]
    Unidentifiable,

    #[error("invalid time grid: {0}")]
    Grid(String),

    #[error("stationary state is degenerate; {0}")]
    Degenerate(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("verdict failed: {0}")]
    Verdict(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema(_) | Error::Json(_) | Error::Io(_) | Error::UnknownName(_) => 2,
            Error::NotHermitian { .. }
            | Error::DimensionMismatch { .. }
            | Error::NotSquare { .. } => 2,
            Error::RankDeficient { .. } | Error::Singular { .. } | Error::NotPositive { .. } => 3,
            Error::UnsupportedMeasure { .. } | Error::Degenerate(_) => 4,
            Error::Verdict(_) => 5,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
