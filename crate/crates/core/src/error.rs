use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("operands live in rings with {left} and {right} variables")]
    VarMismatch { left: usize, right: usize },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("coefficient is not rational: {0}")]
    CoefficientNotRational(String),
    #[error("exponent lies outside the lattice: {0}")]
    ExponentOutsideLattice(String),
    #[error("evaluation point has a zero unit coordinate at index {0}")]
    ZeroUnitCoordinate(usize),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("malformed document: {0}")]
    Format(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
