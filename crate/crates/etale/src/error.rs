use bm_padic::PadicError;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EtaleError {
    #[error("degree {0} is not of the form 2g + 2 with g >= 1")]
    BadDegree(usize),
    #[error("polynomial is not separable")]
    Singular,
    #[error("element is a zero divisor in L")]
    ZeroDivisor,
    #[error("element has norm {0}, which is not a rational square")]
    NonSquareNorm(BigRational),
    #[error("incomplete factorization of {0}")]
    IncompleteFactorization(String),
    #[error(transparent)]
    Local(#[from] PadicError),
}

pub type Result<T> = std::result::Result<T, EtaleError>;
