use thiserror::Error;

use crate::tensoralgebra::SubsetIndex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero quaternion")]
    ZeroDivisor,

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("arity {0} exceeds the supported maximum of {max}", max = crate::tensoralgebra::MAX_ARITY)]
    ArityTooLarge(usize),

    #[error("entry {position} is not a unit pure-imaginary quaternion")]
    NotAUnit { position: usize },

    #[error("polynomial is not divisible by b{variable}")]
    NotDivisible { variable: usize },

    #[error("monomial has decreasing variable order: {term}")]
    NonOrderedMonomial { term: String },

    #[error("x{variable} is real; the spherical derivative quotient is undefined there")]
    RealFiber { variable: usize },

    #[error("function is not slice in x{variable} (component {witness} is nonzero)")]
    NotSliceInVariable { variable: usize, witness: SubsetIndex },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("step {step} is degenerate at coordinate magnitude {scale}")]
    DegenerateStep { step: f64, scale: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
}

impl Error {
    /// Short machine-readable name used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroDivisor => "ZeroDivisor",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::ArityTooLarge(_) => "ArityTooLarge",
            Error::NotAUnit { .. } => "NotAUnit",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::NonOrderedMonomial { .. } => "NonOrderedMonomial",
            Error::RealFiber { .. } => "RealFiber",
            Error::NotSliceInVariable { .. } => "NotSliceInVariable",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::DegenerateStep { .. } => "DegenerateStep",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Syntax { .. } => "SyntaxError",
        }
    }
}
