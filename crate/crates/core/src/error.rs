use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("GF({p}^{m}) is outside the supported range (order at most 2^16)")]
    DegreeTooLarge { p: u32, m: u32 },
    #[error("encoding {value} is not an element of GF({q})")]
    InvalidEncoding { value: u64, q: u32 },
    #[error("element {0} is not a square")]
    NonSquare(u32),
    #[error("q = {0} is not a square")]
    NonSquareQ(u64),
    #[error("level {level} is not supported (max {max})")]
    UnsupportedLevel { level: usize, max: usize },
    #[error("unsupported locus: {0}")]
    UnsupportedLocus(String),
    #[error("valuation of the zero function")]
    ZeroFunction,
    #[error("pole outside the constant field: {0}")]
    NonRationalPoleField(String),
    #[error("local expansion did not resolve within {0} terms")]
    ExpansionCap(usize),
    #[error("evaluation divisor and G share support: {0}")]
    SupportOverlap(String),
    #[error("differential has valuation {found} at evaluation place {place}, expected -1")]
    EtaValuationMismatch { place: String, found: i64 },
    #[error("dual code check failed: {0}")]
    DualityCheckFailed(String),
    #[error("self-duality check failed: {0}")]
    SelfDualityCheckFailed(String),
    #[error("parameter out of range: {0}")]
    RangeError(String),
    #[error("automorphism maps place {0} outside the evaluation set")]
    PlaceNotMapped(String),
    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),
    #[error("enumeration of {size} elements exceeds budget {budget}")]
    EnumerationBudgetExceeded { size: u128, budget: u128 },
    #[error("argument outside the formula's domain: {0}")]
    DomainError(String),
    #[error("ell = {0} is too small for this comparison (needs ell > 3)")]
    EllTooSmall(u32),
    #[error("unknown {kind} '{name}'")]
    UnknownStrategy { kind: &'static str, name: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
