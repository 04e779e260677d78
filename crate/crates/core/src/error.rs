use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ground set too large for exact measure: n = {n} exceeds cap {cap}")]
    MeasureCapExceeded { n: usize, cap: usize },

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    /// Enumeration or search budget ran out before the operation could finish.
    #[error("budget exhausted: {what} needs {needed} units, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("exact automorphism search limited to n <= {cap} (got n = {n}); use a group witness instead")]
    SearchCapExceeded { n: usize, cap: usize },

    #[error("group has more than {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("witness group is not transitive (orbit of point 1 has {orbit} of {n} points)")]
    NotTransitive { orbit: usize, n: usize },

    #[error("family file: {0}")]
    Format(String),

    /// A construction failed its own post-condition check. Always a bug.
    #[error("internal construction check failed: {0}")]
    Construction(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
