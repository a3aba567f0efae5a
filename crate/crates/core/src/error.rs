use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two thin atoms whose intersection or difference the rule table
    /// cannot reduce.
    #[error("unsupported intersection: {0}")]
    UnsupportedIntersection(String),

    #[error("point {0} lies outside the function's domain")]
    OutsideDomain(String),

    #[error("divisor may vanish: {0}")]
    DivisionByPossiblyZero(String),

    #[error("quotient is not piecewise polynomial: divisor branch {0} is not constant")]
    NonPolynomialQuotient(String),

    #[error("operands have different domains")]
    DomainMismatch,

    #[error("prerequisite not met: {0}")]
    PrerequisiteNotMet(String),

    #[error("density undecidable: {0}")]
    UndecidableDensity(String),

    #[error("undecidable: {0}")]
    Undecidable(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("range error: {0}")]
    Range(String),

    #[error("unknown atom `{name}` at line {line}, column {column}")]
    UnknownAtom {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
