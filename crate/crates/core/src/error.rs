use thiserror::Error;

/// Errors reported by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("dimension overflow: {0}")]
    Overflow(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not symmetric (max deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("term {term} does not conserve particle number and spin-z")]
    SectorViolation { term: String },

    #[error("zero vector")]
    ZeroVector,

    #[error("state vector is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("Krylov evolution did not converge: {0}")]
    NoConvergence(String),

    #[error("Krylov subspace is degenerate: all overlap eigenvalues below {threshold:e}")]
    DegenerateSubspace { threshold: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
