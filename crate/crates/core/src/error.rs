use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A factor that must be nonzero vanished within the working-precision margin.
    #[error("pole: {0}")]
    Pole(String),

    #[error("series did not converge: {0}")]
    Convergence(String),

    /// Input outside the real positive verification domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Group closure grew past its cap.
    #[error("group closure exceeded {cap} elements")]
    Size { cap: usize },

    #[error("no admissible point found after {attempts} attempts")]
    SearchExhausted { attempts: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Pole and convergence failures are numerical; everything else is a usage problem.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Pole(_) | Error::Convergence(_) | Error::Domain(_))
    }
}
