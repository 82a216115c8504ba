use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variants are grouped by the subsystem that raises them; the CLI maps them
/// onto exit codes via [`Error::kind`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // finite fields and number theory
    #[error("{0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("field order {p}^{m} exceeds the 2^20 cap")]
    OrderTooLarge { p: u32, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is even")]
    EvenModulus(u64),
    #[error("{a} is not a quadratic residue modulo {r}")]
    NonResidue { a: i64, r: u64 },
    #[error("invalid field element {0}")]
    InvalidElement(String),

    // projective geometry
    #[error("enumeration of {what} needs {count} items, cap is {cap}")]
    SpaceTooLarge { what: &'static str, count: u128, cap: u128 },
    #[error("points are identical")]
    IdenticalPoints,
    #[error("empty point set")]
    EmptySet,
    #[error("zero vector has no projective point")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    // codes
    #[error("enumeration budget exceeded: {count} > {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("need {needed} evaluation points but the field has {available}")]
    TooFewPoints { needed: usize, available: usize },
    #[error("generator matrix has a zero column at index {0}")]
    DegenerateCode(usize),
    #[error("argument outside the domain: {0}")]
    DomainError(String),

    // graphs
    #[error("{0} is not congruent to 1 mod 4")]
    BadResidueClass(u64),
    #[error("group has {0} elements, more than the cap")]
    GroupTooLarge(u64),
    #[error("n*d must be even (n = {n}, d = {d})")]
    ParityError { n: usize, d: usize },
    #[error("graph has {n} vertices, more than the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph is not regular")]
    NotRegular,
    #[error("lambda {lambda} is not below the degree {d}")]
    DegenerateSpectrum { d: f64, lambda: f64 },
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    // strong blocking sets
    #[error("vertices {0} and {1} carry the same projective point")]
    RepeatedPoint(usize, usize),
    #[error("integrity evidence {evidence} is below the required n - d + 1 = {required}")]
    IntegrityHypothesisUnmet { evidence: usize, required: usize },
    #[error("construction hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("points are not collinear")]
    NotCollinear,
    #[error("points are not distinct")]
    NotDistinct,
    #[error("avoidance property of the source line set is not certified")]
    AvoidanceNotCertified,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    // constants
    #[error("constraint violated for q = {q}, d = {d}")]
    ConstraintViolated { q: f64, d: f64 },
    #[error("no admissible degree for q = {0}")]
    NoAdmissibleD(f64),

    // file formats
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPrimeCharacteristic(_) => "NonPrimeCharacteristic",
            Error::OrderTooLarge { .. } => "OrderTooLarge",
            Error::DivisionByZero => "DivisionByZero",
            Error::EvenModulus(_) => "EvenModulus",
            Error::NonResidue { .. } => "NonResidue",
            Error::InvalidElement(_) => "InvalidElement",
            Error::SpaceTooLarge { .. } => "SpaceTooLarge",
            Error::IdenticalPoints => "IdenticalPoints",
            Error::EmptySet => "EmptySet",
            Error::ZeroVector => "ZeroVector",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::TooFewPoints { .. } => "TooFewPoints",
            Error::DegenerateCode(_) => "DegenerateCode",
            Error::DomainError(_) => "DomainError",
            Error::BadResidueClass(_) => "BadResidueClass",
            Error::GroupTooLarge(_) => "GroupTooLarge",
            Error::ParityError { .. } => "ParityError",
            Error::TooLarge { .. } => "TooLarge",
            Error::NotRegular => "NotRegular",
            Error::DegenerateSpectrum { .. } => "DegenerateSpectrum",
            Error::BudgetExhausted(_) => "BudgetExhausted",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::RepeatedPoint(..) => "RepeatedPoint",
            Error::IntegrityHypothesisUnmet { .. } => "IntegrityHypothesisUnmet",
            Error::HypothesisUnmet(_) => "HypothesisUnmet",
            Error::NotCollinear => "NotCollinear",
            Error::NotDistinct => "NotDistinct",
            Error::AvoidanceNotCertified => "AvoidanceNotCertified",
            Error::Inconsistent(_) => "Inconsistent",
            Error::ConstraintViolated { .. } => "ConstraintViolated",
            Error::NoAdmissibleD(_) => "NoAdmissibleD",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
