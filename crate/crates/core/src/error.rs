use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined or claimed.
    #[error("domain error: {0}")]
    Domain(String),

    /// The second moment ∫ x² |dT(x)| of a tail function diverges.
    #[error("infinite second moment: {0}")]
    InfiniteMoment(String),

    /// A supremum or infimum was not attained inside the search window.
    #[error("optimum not attained: {0}")]
    NotAttained(String),

    /// The integer envelope sup_n n·φ(λ/√n) was still increasing at n_max.
    #[error("envelope not captured: maximum at n_max = {n_max} for λ = {lambda}; increase n_max")]
    EnvelopeBoundary { n_max: u64, lambda: f64 },

    /// A statistical or structural precondition on the input does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
