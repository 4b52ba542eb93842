//! Error types shared across the engine.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoeffError {
    #[error("division by zero")]
    ZeroDivision,
    #[error("unsupported radical: {0}")]
    UnsupportedRadical(String),
}

#[derive(Debug, Error)]
pub enum FrobeniusError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular form: {0}")]
    SingularForm(String),
    #[error("singular matrix")]
    Singular,
    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),
    #[error("unknown built-in algebra name: {0}")]
    UnknownName(String),
    #[error("no unity")]
    NoUnity,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Error)]
pub enum HamopsError {
    #[error("singular metric")]
    SingularMetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("metric is not parallel along the connection: nabla h != 0 at {0}")]
    NotParallel(String),
    #[error("connection is not flat: curvature component {0} is nonzero")]
    NotFlat(String),
    #[error("unsupported operator order {0}: need odd k >= 3 for the pair test")]
    UnsupportedOrder(i64),
    #[error("operator invariant violated: {0}")]
    InvalidOperator(String),
    #[error("unsupported substitution: {0}")]
    UnsupportedSubstitution(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
}

#[derive(Debug, Error)]
pub enum HierarchyError {
    #[error("unsupported algebra: {0}")]
    UnsupportedAlgebra(String),
    #[error("recursion step {step} not invertible: det = {det}")]
    NonInvertibleStep { step: usize, det: String },
    #[error("chain broken at component {alpha}, level {level}: residual {residual}")]
    ChainBroken { alpha: usize, level: usize, residual: String },
    #[error("algebra has no unity")]
    NoUnity,
    #[error("wrong algebra: {0}")]
    WrongAlgebra(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Hamops(#[from] HamopsError),
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("structure constants are not commutative: witness {0}")]
    NotCommutative(String),
    #[error("structure constants are not associative: witness {0}")]
    NotAssociative(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("complex input rejected: classification runs over the reals")]
    ComplexInput,
    #[error("only dimension 2 is supported, got {0}")]
    WrongDimension(usize),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
}
