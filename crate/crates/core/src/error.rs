use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at z = {0}")]
    Pole(Complex64),
    #[error("evaluation point coincides with node {index}")]
    AtNode { index: usize },
    #[error("intermediate pole in tail-ordered evaluation at term {term}")]
    IntermediatePole { term: usize },
    #[error("inverse-difference breakdown adding node {k} at step {i}")]
    Breakdown { k: usize, i: usize },
    #[error("non-finite continued-fraction coefficient at node {k}")]
    NonFiniteCoefficient { k: usize },
    #[error("duplicate node at index {0}")]
    DuplicateNode(usize),
    #[error("zero weight at node {0}")]
    ZeroWeight(usize),
    #[error("derivative order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("SVD did not converge in {sweeps} sweeps")]
    SvdNoConvergence { sweeps: usize },
    #[error("{0} outside the domain of definition")]
    Domain(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
