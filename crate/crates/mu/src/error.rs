use bm_etale::EtaleError;
use bm_padic::{PadicError, Place};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MuError {
    #[error("disc recursion at {0} exceeded depth {1}")]
    DepthExceeded(Place, u32),
    #[error("incomplete factorization of the discriminant")]
    IncompleteFactorization,
    #[error(transparent)]
    Local(#[from] PadicError),
    #[error(transparent)]
    Etale(#[from] EtaleError),
}

pub type Result<T> = std::result::Result<T, MuError>;
