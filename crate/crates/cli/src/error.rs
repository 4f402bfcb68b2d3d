use hunt_core::error::HuntError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("hypothesis not verified: {0}")]
    Hypothesis(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Hypothesis(_) => 4,
        }
    }
}

impl From<HuntError> for CliError {
    fn from(e: HuntError) -> Self {
        match e {
            HuntError::HypothesisNotVerified(m) | HuntError::NotDominated(m) => CliError::Hypothesis(m),
            HuntError::QuadratureFailure { .. } | HuntError::MaxSubdivisions { .. } | HuntError::EvaluationFailure(_) => {
                CliError::Numerical(e.to_string())
            }
            HuntError::UnknownName(_) => CliError::Usage(e.to_string()),
            other => CliError::Spec(other.to_string()),
        }
    }
}
