use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {what} = {value} ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("forecast vector is not on the probability simplex (sum = {sum})")]
    Simplex { sum: f64 },

    #[error("outcome vector is not one-hot")]
    NotOneHot,

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid k-step weights: {0}")]
    Weights(String),

    #[error(
        "score differential {value} at t = {index} exceeds the declared bound {bound}"
    )]
    BoundViolation { index: u64, value: f64, bound: f64 },

    #[error("no observations yet (t = 0)")]
    NoData,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("e-value history contains a nonpositive value {0}")]
    NonPositiveEvidence(f64),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }
}
