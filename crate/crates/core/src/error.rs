use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid literal {0}")]
    InvalidLiteral(i32),
    #[error("clause contains complementary literals on variable {0}")]
    ComplementaryLiterals(u32),
    #[error("literal {literal} refers to variable outside 1..={num_vars}")]
    VariableOutOfRange { literal: i32, num_vars: u32 },
    #[error("assignment has {actual} values but the formula has {expected} variables")]
    AssignmentLength { expected: usize, actual: usize },
    #[error("pattern of length {len} exceeds the {num_vars} available variables")]
    PatternTooLong { len: usize, num_vars: u32 },
    #[error("pattern store limit of {limit} exceeded while processing clause {clause_index}")]
    PatternStoreExceeded { clause_index: usize, limit: usize },
    #[error("invalid engine configuration: {0}")]
    InvalidConfig(String),
    #[error("formula is unsatisfiable")]
    Unsatisfiable,
    #[error("invalid literal priority: {0}")]
    InvalidPriority(String),
    #[error("oracle refuses {num_vars} variables (limit {max_n})")]
    OracleLimit { num_vars: u32, max_n: u32 },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("invalid generator parameters: {0}")]
    InvalidGenSpec(String),
    #[error("invalid benchmark grid: {0}")]
    InvalidGrid(String),
    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Csv(err.to_string())
    }
}
