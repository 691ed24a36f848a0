use thiserror::Error;

pub type Result<T> = std::result::Result<T, KinematicsError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    /// A value failed one of the algebraic invariants of its type.
    #[error("constraint violation: {what} (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    Constraint {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("non-finite component in {0}")]
    NonFinite(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Numerical transport left the constraint manifold; the step is too large.
    #[error("drift of {quantity} reached {drift:.3e} at s = {s} (tolerance {tolerance:.3e})")]
    Drift {
        quantity: &'static str,
        drift: f64,
        tolerance: f64,
        s: f64,
    },

    #[error("velocities at s1 and s2 differ by {mismatch:.3e}; Thomas rotation is undefined")]
    VelocityMismatch { mismatch: f64 },

    #[error("time {t} outside covered range [{min}, {max}]")]
    OutOfRange { t: f64, min: f64, max: f64 },
}

impl KinematicsError {
    pub(crate) fn check(what: &'static str, residual: f64, tolerance: f64) -> Result<()> {
        if residual.is_finite() && residual <= tolerance {
            Ok(())
        } else {
            Err(KinematicsError::Constraint {
                what,
                residual,
                tolerance,
            })
        }
    }
}
