use thiserror::Error;

use crate::parser::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operands are defined over different mode bases")]
    BasisMismatch,
    #[error("operands have different particle statistics")]
    StatisticsMismatch,
    #[error("mode index {index} out of range for a basis of {dim} modes")]
    ModeIndex { index: usize, dim: usize },
    #[error("invalid mode basis: {0}")]
    InvalidBasis(String),
    #[error("projection onto the probe state has zero amplitude")]
    ZeroProjection,
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("reduced matrix vanishes: the state has no support on the traced modes")]
    ZeroTrace,
    #[error("operation needs at least {required} particles, state has {found}")]
    ParticleNumber { required: usize, found: usize },
    #[error("region is empty")]
    EmptyRegion,
    #[error("unknown spatial tag `{0}`")]
    UnknownSpatialTag(String),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("density matrix has trace {0}, expected 1")]
    NotNormalized(f64),
    #[error("density matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
