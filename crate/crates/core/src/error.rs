use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A spec or configuration value violates an invariant.
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    /// An adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// A series did not settle within its term budget.
    #[error("series did not converge within {terms} terms (partial sum {partial:e})")]
    Series { partial: f64, terms: usize },

    /// The ODE step size collapsed.
    #[error("step size underflow at t = {t:e} s, z = {z:e} m")]
    StepUnderflow { t: f64, z: f64 },

    /// The ODE integrator used up its step budget.
    #[error("step budget of {steps} exhausted at t = {t:e} s, z = {z:e} m")]
    StepBudget { steps: usize, t: f64, z: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical method rather than of its inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature { .. }
                | Error::Series { .. }
                | Error::StepUnderflow { .. }
                | Error::StepBudget { .. }
        )
    }
}
