use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("signal must contain at least one sample")]
    Empty,
    #[error("length mismatch: {left} samples vs {right} samples")]
    LengthMismatch { left: usize, right: usize },
    #[error("length {n} is too short: at least {min} samples are required")]
    TooShort { n: usize, min: usize },
    #[error("length {0} is not prime")]
    NotPrime(usize),
    #[error("sample {0} is not finite")]
    NonFinite(usize),
    #[error("modulus polynomial is zero")]
    ZeroModulus,
    #[error("polynomials are not coprime: gcd has degree {0}")]
    NotCoprime(usize),
    #[error("expected {expected} residues, got {actual}")]
    ResidueCount { expected: usize, actual: usize },
    #[error("operand degree {degree} must be below modulus degree {modulus}")]
    DegreeTooLarge { degree: usize, modulus: usize },
}
