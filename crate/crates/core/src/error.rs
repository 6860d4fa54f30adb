use thiserror::Error;

use crate::discrimination::MpeSolution;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed-form expression produced a value that violates one of its own
    /// identities beyond round-off (e.g. a negative probability).
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    /// Minimum-error iteration ran out of iterations. The best iterate found is
    /// still returned so callers can decide whether it is good enough.
    #[error("MPE iteration did not converge in {iterations} iterations (best success {:.15})", best.success_probability)]
    MpeNotConverged {
        iterations: usize,
        best: Box<MpeSolution>,
    },

    #[error("Blahut-Arimoto did not converge in {iterations} iterations: capacity in [{lower}, {upper}]")]
    CapacityNotConverged {
        iterations: usize,
        lower: f64,
        upper: f64,
        priors: Vec<f64>,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for the iteration-budget failures, which the CLI maps to a
    /// distinct exit status.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::MpeNotConverged { .. } | Error::CapacityNotConverged { .. }
        )
    }
}

pub(crate) fn check_nbar(nbar: f64) -> Result<()> {
    if nbar.is_nan() || nbar < 0.0 {
        return Err(Error::domain(format!(
            "mean photon number must be >= 0, got {nbar}"
        )));
    }
    Ok(())
}
