use bm_mu::MuError;
use bm_padic::Place;
use thiserror::Error;

/// Stage of the algorithm at which an upstream error occurred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Step {
    SelectPrimes,
    Solubility,
    LocalImages,
    Functionals,
    Intersection,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("incomplete factorization: {0}")]
    IncompleteFactorization(String),
    #[error("functional {ell} is nonzero on the local image at {place}, outside its support")]
    FunctionalOutsideSupport { ell: usize, place: Place },
    #[error("subproduct search exceeded the budget of {0} nodes")]
    NodeBudget(u64),
    #[error("{step:?}: {source}")]
    Upstream { step: Step, source: MuError },
    #[error("malformed report: {0}")]
    Report(String),
}

impl EngineError {
    /// Budget or precision exhaustion rather than a mathematical failure.
    pub fn is_resource(&self) -> bool {
        match self {
            EngineError::NodeBudget(_) => true,
            EngineError::Upstream { source, .. } => match source {
                MuError::DepthExceeded(..) => true,
                MuError::Local(e) => bm_padic::is_precision_error(e),
                _ => false,
            },
            _ => false,
        }
    }

    pub(crate) fn at(step: Step) -> impl FnOnce(MuError) -> EngineError {
        move |source| EngineError::Upstream { step, source }
    }
}

pub type Result<T> = std::result::Result<T, EngineError>;
