use thiserror::Error;

/// Errors raised by body construction, measurement and the verification harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("ray search left the bounding ball without bracketing the boundary")]
    NoBracket,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("operation not supported in dimension {0}")]
    DimensionUnsupported(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not a supporting boundary point for the given normal (gap {gap:e})")]
    NotSupporting { gap: f64 },
    #[error("target cap volume {target:e} is not below the admissible limit {limit:e}")]
    TargetTooLarge { target: f64, limit: f64 },
    #[error("Monte Carlo noise {noise:e} exceeds solver tolerance {tol:e}; raise the sample budget")]
    SolverStall { noise: f64, tol: f64 },
    #[error("hyperplane does not meet the body")]
    EmptySection,
    #[error("halfspace intersection is empty at this budget")]
    EmptyIntersection,
    #[error("second-moment matrix is ill conditioned (eigenvalue ratio {0:e})")]
    IllConditioned(f64),
    #[error("section estimate noise {noise:e} exceeds ratio resolution {resolution:e}")]
    SectionNoise { noise: f64, resolution: f64 },
    #[error("admissible facet-count window [{lo}, {hi}] is empty")]
    WindowEmpty { lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Invalid(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::DimensionMismatch { .. }
        )
    }

    /// True for violated preconditions of an operation (admissible `t`, dimension, window).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::TargetTooLarge { .. } | Error::NotSupporting { .. } | Error::DimensionUnsupported(_) | Error::WindowEmpty { .. }
        )
    }

    /// Process exit code: 2 for configuration and precondition errors, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.is_config() || self.is_precondition() {
            2
        } else {
            3
        }
    }
}
