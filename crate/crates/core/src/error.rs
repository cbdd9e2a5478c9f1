use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg} (grammar: terms like `3/2*x^2*y - z + 1`, `^` takes a non-negative integer)")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a quadratic in x, y, z: {0}")]
    NotQuadratic(String),

    #[error("polynomial is constant")]
    ConstantPolynomial,

    #[error("wrong case: {0}")]
    WrongCase(String),

    #[error("budget exceeded: {required} evaluations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("coefficient {0} has a denominator that is not invertible modulo {1}")]
    NotInvertible(String, u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("inconsistent threshold chain: {0}")]
    InconsistentChain(String),
}
