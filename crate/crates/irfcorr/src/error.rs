use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// identify the offending input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("lattice length {0} is odd; only even lengths are supported")]
    OddLength(usize),
    #[error("lattice length {got} is below the minimum {min}")]
    LengthTooSmall { got: usize, min: usize },
    #[error("spectral point {0} is not finite")]
    NonFiniteSpectralPoint(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("leading eigenvalue is degenerate: modulus gap {gap:.3e}")]
    DegenerateLeading { gap: f64 },
    #[error("ground level is degenerate: gap {gap:.3e}")]
    DegenerateGround { gap: f64 },
    #[error("{stage} did not converge after {iterations} iterations (last residual {residual:.3e})")]
    NoConvergence {
        stage: &'static str,
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    #[error("eigenvalue at spectral point {0} was not precomputed")]
    MissingEigenvalue(String),
    #[error("singular prefactor: (λ_k − λ_n)² = 1 for k = {k}")]
    SingularPrefactor { k: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("direct-sum structure violated by {deviation:.3e}")]
    StructureViolation { deviation: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("spectral parameter {lambda} is too close to a kernel pole line")]
    PoleProximity { lambda: String },
    #[error("coincident spectral points: {0}")]
    CoincidentPoints(String),
    #[error("imaginary part {imag:.3e} of {what} exceeds the purity bound")]
    ImpurePart { what: String, imag: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
