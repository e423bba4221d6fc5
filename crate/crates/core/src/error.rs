use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("denominator may vanish on the enclosure interval")]
    DenominatorVanishes,
    #[error("point {0} lies outside the domain of the bound")]
    OutOfDomain(String),
    #[error("piecewise bounds cover different domains")]
    DomainMismatch,
    #[error("branch-and-bound exceeded its node budget of {budget} (gap {gap:e})")]
    NonConvergence { budget: usize, gap: f64 },
    #[error("family index {0} is below the first valid index 6")]
    InvalidFamilyIndex(u32),
    #[error("sieve limit {limit} exceeds the configured maximum {max}")]
    LimitTooLarge { limit: u64, max: u64 },
    #[error("range error: {0}")]
    OutOfRange(String),
    #[error("zeros file line {line}: {msg}")]
    ZerosParse { line: usize, msg: String },
    #[error("zeros file line {line}: ordinate is not strictly greater than the previous one")]
    ZerosOrder { line: usize },
    #[error("zero set only reaches T = {max_t}, but T = {requested} was requested")]
    InsufficientZeros { requested: f64, max_t: f64 },
    #[error("{count} ordinates exceed the cap of {cap} for the pair-sum method")]
    TooManyZeros { count: usize, cap: usize },
    #[error("cannot parse '{text}' as an exact number: {msg}")]
    ParseExact { text: String, msg: String },
    #[error("invalid expression '{text}': {msg}")]
    Expression { text: String, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed sieve cache: {0}")]
    CacheFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ParseExact { .. } | Error::InvalidArgument(_) => 1,
            Error::NonConvergence { .. } => 3,
            Error::Io(_)
            | Error::ZerosParse { .. }
            | Error::ZerosOrder { .. }
            | Error::CacheFormat(_) => 4,
            _ => 2,
        }
    }
}
