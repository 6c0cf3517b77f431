use thiserror::Error;

use crate::lattice::Weight;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group has invalid shape: {0}")]
    InvalidGroup(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("character {0:?} has zero differential")]
    ZeroDifferential(Weight),

    #[error("flag blocks do not partition the moving weights: {0}")]
    BlockMismatch(String),

    #[error("no admissible polarizing vector found in the search schedule")]
    NoAdmissibleGamma,

    #[error("polarizing vector pairs to zero with weight {0:?}")]
    NotPolarizable(Weight),

    #[error("product is not certified summable: {0}")]
    NotSummable(String),

    #[error("generalized character is not certified periodic along the character")]
    NotPeriodic,

    #[error("cannot reconstruct the induced character: {0}")]
    ReconstructionUnsupported(String),

    #[error("module is not a submodule: {0}")]
    NotSubmodule(String),

    #[error("polarizing vector not admissible: {0}")]
    GammaNotAdmissible(String),

    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },

    #[error("invariant violated for {name}: {reason}")]
    Invariant { name: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGroup(_) => "E_GROUP",
            Error::DimensionMismatch { .. } => "E_DIMENSION",
            Error::InvalidWeight(_) => "E_WEIGHT",
            Error::ZeroDifferential(_) => "E_ZERO_DIFFERENTIAL",
            Error::BlockMismatch(_) => "E_BLOCK_MISMATCH",
            Error::NoAdmissibleGamma => "E_NO_ADMISSIBLE_GAMMA",
            Error::NotPolarizable(_) => "E_NOT_POLARIZABLE",
            Error::NotSummable(_) => "E_NOT_SUMMABLE",
            Error::NotPeriodic => "E_NOT_PERIODIC",
            Error::ReconstructionUnsupported(_) => "E_RECONSTRUCTION_UNSUPPORTED",
            Error::NotSubmodule(_) => "E_NOT_SUBMODULE",
            Error::GammaNotAdmissible(_) => "E_GAMMA_NOT_ADMISSIBLE",
            Error::Schema { .. } => "E_SCHEMA",
            Error::Invariant { .. } => "E_INVARIANT",
            Error::Io(_) => "E_IO",
        }
    }

    /// True for errors raised while reading or validating input.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Schema { .. } | Error::Invariant { .. } | Error::Io(_)
        )
    }
}
