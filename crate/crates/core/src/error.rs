use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid field modulus {modulus}: {reason}")]
    BadModulus { modulus: String, reason: String },
    #[error("no built-in modulus for q = {0}; pass one explicitly")]
    NoBuiltinModulus(u64),
    #[error("{0}")]
    Unsupported(String),
    #[error("polynomial {0} is reducible")]
    Reducible(String),
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("constant polynomial {0} has no irreducibility test")]
    ConstantPolynomial(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("series has a non-unit constant term")]
    NonUnitSeries,
    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("index {n} outside the admissible range {range}")]
    OutOfRange { n: u64, range: String },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("valuation still saturated at the precision cap k = {0}")]
    PrecisionCap(u32),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
