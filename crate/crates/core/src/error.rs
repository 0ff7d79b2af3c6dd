use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("{name} = {value} is outside the domain {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// Evaluation at a pole.
    #[error("pole at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    /// A point landed on a branch cut of a multivalued inverse.
    #[error("branch cut: {0}")]
    BranchCut(String),
    /// Parameters are individually valid but do not describe a usable configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    /// An iterative procedure (trajectory tracing, root finding) failed.
    #[error("no convergence: {0}")]
    NonConvergence(String),
    /// An arc family violates admissibility.
    #[error("inadmissible arc family: {0}")]
    Inadmissible(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
