use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge (off-diagonal residual {residual:e})")]
    NotConverged { residual: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate geometry: dipole parallel to separation (cos^2 = 1)")]
    DegenerateGeometry,

    #[error(
        "collective ratio a = {a} violates positivity (damping spectrum has eigenvalue {min_eigenvalue})"
    )]
    Positivity { a: f64, min_eigenvalue: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("integration diagnostic at t = {time}: {detail}")]
    Integration { time: f64, detail: String },
}
