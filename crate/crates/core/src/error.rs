use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {point} is not in the domain")]
    Domain { point: Rational },
    #[error("operands live in different ambient spaces")]
    MixedSpaces,
    #[error("map is not injective: f({x1}) = f({x2}) = {y}")]
    Injectivity { x1: Rational, x2: Rational, y: Rational },
    #[error("maps disagree at {point}: {left} vs {right}")]
    Incompatible { point: Rational, left: Rational, right: Rational },
    #[error("representation error: {0}")]
    Representation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(Rational),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search bound {bound} exhausted without a witness")]
    SearchExhausted { bound: u64 },
    #[error("hypothesis failed: {reason} (witness {witness})")]
    Hypothesis { reason: String, witness: Rational },
}

pub type Result<T> = std::result::Result<T, Error>;
