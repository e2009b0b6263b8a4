use std::fmt;

use thiserror::Error;

/// Why a frequency schedule could not be realized by the configured drives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Infeasibility {
    /// The required intensity exceeds the allowed maximum.
    BoundExceeded,
    /// The schedule needs a stiffness shift of this sign but no mode provides it.
    MissingSign { positive: bool },
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasibility::BoundExceeded => write!(f, "required drive intensity exceeds bound"),
            Infeasibility::MissingSign { positive: true } => {
                write!(f, "schedule rises above the bare frequency but no mode has positive stiffness")
            }
            Infeasibility::MissingSign { positive: false } => {
                write!(f, "schedule falls below the bare frequency but no mode has negative stiffness")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("drive intensity f^2 = {value} for mode {mode} is outside [0, 1]")]
    ControlOutOfRange { mode: usize, value: f64 },

    #[error("displacement too close to the cavity resonance: |Gx/Delta| = {ratio}")]
    PoleProximity { ratio: f64 },

    #[error("infeasible control at t = {time:e} s (required {required}): {reason}")]
    InfeasibleControl {
        time: f64,
        /// f² when a bound is exceeded, |ω_eff²/ω² - 1| when the sign is missing.
        required: f64,
        mode: Option<usize>,
        reason: Infeasibility,
    },

    #[error("scaling function collapsed to b = {b:e} at t = {time:e} s")]
    SingularScaling { time: f64, b: f64 },

    #[error("transfer matrix is no longer symplectic: |det S - 1| = {residual:e}")]
    SymplecticDrift { residual: f64 },

    #[error("no feasible duration in the probed bracket (upper bound {upper} / omega)")]
    NoFeasiblePoint { upper: f64 },

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
