use thiserror::Error;

/// Errors raised by the solvers.
///
/// Variants are grouped by how a caller should react: domain and parameter
/// errors mean the inputs are outside a method's region of validity, while
/// [`Error::NoConvergence`] is a genuine numerical failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A recursion or overlap denominator vanished.
    #[error("singular parameters: {0}")]
    Singular(String),

    #[error("invalid parameters: {0}")]
    InvalidParameter(String),

    /// The requested operation belongs to a different solution branch
    /// (for example the closed-form spectrum with `C != 0`).
    #[error("wrong branch: {0}")]
    WrongBranch(String),

    #[error("TRA inadmissible: A = {a} is below the limit -lambda^2 q^2 / 8 = {limit}")]
    TraInadmissible { a: f64, limit: f64 },

    #[error("basis exhausted at E = {energy}: no square-integrable basis function")]
    BasisExhausted { energy: f64 },

    #[error("level {level} not found: B = {target} is outside the scanned range")]
    NotFound { level: usize, target: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("eigenvalue iteration failed to converge at index {index}")]
    NoConvergence { index: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("potential parameter table is empty")]
    EmptyTable,
}

impl Error {
    /// Short machine-readable tag, used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Singular(_) => "singular-parameters",
            Error::InvalidParameter(_) => "invalid-parameters",
            Error::WrongBranch(_) => "wrong-branch",
            Error::TraInadmissible { .. } => "tra-inadmissible",
            Error::BasisExhausted { .. } => "basis-exhausted",
            Error::NotFound { .. } => "not-found",
            Error::InsufficientData(_) => "insufficient-data",
            Error::NoConvergence { .. } => "numerical-failure",
            Error::Contract(_) => "contract",
            Error::EmptyTable => "empty-table",
        }
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
