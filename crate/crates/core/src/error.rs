use thiserror::Error;

/// Errors raised by model construction, measure algebra and numerics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HuntError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Q is not symmetric (max asymmetry {0:e})")]
    NonSymmetricQ(f64),
    #[error("Q has a negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),
    #[error("Levy measure is not integrable against 1 ^ |x|^2: {0}")]
    NonIntegrableLevyMeasure(String),
    #[error("atom located at the origin")]
    AtomAtOrigin,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("moment of order {p} is not finite near the origin")]
    NonIntegrable { p: f64 },
    #[error("hypothesis not verified: {0}")]
    HypothesisNotVerified(String),
    #[error("signed part not representable in the supported density families: {0}")]
    SignedPartNotRepresentable(String),
    #[error("measure is not dominated: {0}")]
    NotDominated(String),
    #[error("measure has infinite total mass")]
    InfiniteMass,
    #[error("quadrature failed to reach tolerance (estimate {estimate}, error {error:e})")]
    QuadratureFailure { estimate: f64, error: f64 },
    #[error("maximum number of subdivisions reached (estimate {estimate}, error {error:e})")]
    MaxSubdivisions { estimate: f64, error: f64 },
    #[error("evaluation failed: {0}")]
    EvaluationFailure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("witness does not split Im psi: max residual {0:e}")]
    InvalidWitness(f64),
    #[error("unknown name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, HuntError>;
