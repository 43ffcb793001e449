use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{what} out of range: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("overflow in {0}")]
    Overflow(&'static str),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {estimate:e})")]
    NonConvergence { tolerance: f64, estimate: f64 },

    #[error("zero scan incomplete on [{lo}, {hi}]: expected {expected} zeros, located {located}")]
    Completeness {
        lo: f64,
        hi: f64,
        expected: usize,
        located: usize,
    },

    #[error("zero set covers up to {have}, but {needed} is required")]
    Coverage { needed: f64, have: f64 },

    #[error("sieve limit {limit} exceeded (needed {needed})")]
    SieveLimit { needed: u64, limit: u64 },

    #[error("pair-sum budget exceeded: {needed} kernel evaluations (cap {cap}); use a tighter window")]
    PairBudget { needed: u64, cap: u64 },

    #[error("zero table line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("zero table line {line}: ordinate {value} does not exceed the previous one")]
    Monotonicity { line: usize, value: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}
