use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{d} exceeds bound {bound}")]
    FieldTooLarge { p: u64, d: u32, bound: u64 },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expected a monic polynomial, got {0}")]
    NotMonic(String),
    #[error("expected an irreducible polynomial, got {0}")]
    NotIrreducible(String),
    #[error("duplicate prime {0}")]
    DuplicatePrime(String),
    #[error("group order {order} exceeds bound {bound}")]
    GroupTooLarge { order: u64, bound: u64 },
    #[error("enumeration of {count} monic polynomials exceeds limit {limit}")]
    EnumerationLimit { count: u64, limit: u64 },
    #[error("series constant term must be 1")]
    BadConstantTerm,
    #[error("mismatched fields or rings")]
    Mismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precision {0} unreachable within enumeration bound")]
    PrecisionUnreachable(i64),
    #[error("payload must have coefficients in the ring of integers")]
    NonIntegralPayload,
    #[error("prime {0} is ramified")]
    Ramified(String),
    #[error("residue action is not F_q-linear")]
    NonLinearAction,
    #[error("insufficient strata: need {need}, have {have}")]
    InsufficientStrata { need: usize, have: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
