use serde::Serialize;

use super::{protocols, ProtocolSpec};
use crate::dynamics::thermal_state;
use crate::error::{Error, Infeasibility, Result};
use crate::model::SystemConfig;
use crate::trajectory::{controls_with_bound, designers, validate};

/// Default search interval for t_f, in units of 1/ω.
pub const DEFAULT_BRACKET: (f64, f64) = (1e-3, 1e3);
pub const MAX_BISECTIONS: usize = 60;
/// Absolute resolution of the search, in units of 1/ω.
pub const TIME_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeConstraints {
    pub max_f_sq: f64,
    /// Upper limit on max |ḟ/f|/|Δ|, if enforced.
    pub max_bo_ratio: Option<f64>,
}

impl Default for TimeConstraints {
    fn default() -> Self {
        Self {
            max_f_sq: 1.0,
            max_bo_ratio: None,
        }
    }
}

/// What rules out durations just below the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Binding {
    /// Some mode would need f² above the bound.
    ControlBound { mode: Option<usize> },
    /// The schedule needs a frequency shift no configured mode can produce.
    MissingSign { positive: bool },
    BoRatio,
    /// Feasible already at the lower end of the bracket.
    LowerBracket,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimalTime {
    pub tf_omega: f64,
    pub binding: Binding,
    /// Infeasible duration closest to `tf_omega` that was probed.
    pub infeasible_below: Option<f64>,
}

/// `None` when the duration is feasible, otherwise the violated constraint.
fn probe(config: &SystemConfig, spec: &ProtocolSpec, limits: &TimeConstraints, tf_omega: f64) -> Result<Option<Binding>> {
    let derived = config.derived()?;
    let spec = ProtocolSpec {
        tf_omega,
        ..spec.clone()
    };
    let ends = match protocols().get(&spec.variant)?.endpoints(config, &derived, &spec) {
        Ok(ends) => ends,
        Err(e) => return binding_of(e),
    };
    let schedule = designers()
        .get(&spec.designer)?
        .design(ends.omega0, ends.omega_f, tf_omega / derived.omega_ang, spec.samples)?;
    let controls = match controls_with_bound(&schedule, config, limits.max_f_sq) {
        Ok(c) => c,
        Err(e) => return binding_of(e),
    };
    if let Some(limit) = limits.max_bo_ratio {
        let mech = &config.mechanical;
        let reference = thermal_state(mech.omega(), mech.bath_temperature, mech.mass);
        if validate(&controls, config, &reference)?.worst_bo_ratio() > limit {
            return Ok(Some(Binding::BoRatio));
        }
    }
    Ok(None)
}

fn binding_of(e: Error) -> Result<Option<Binding>> {
    match e {
        Error::InfeasibleControl { reason, mode, .. } => Ok(Some(match reason {
            Infeasibility::BoundExceeded => Binding::ControlBound { mode },
            Infeasibility::MissingSign { positive } => Binding::MissingSign { positive },
        })),
        other => Err(other),
    }
}

/// Shortest feasible stroke, by bisection over `bracket` (units of 1/ω).
///
/// Feasibility is assumed monotone in t_f. The result is within
/// [`TIME_TOLERANCE`] of the boundary unless [`MAX_BISECTIONS`] runs out first.
pub fn minimal_time(
    config: &SystemConfig,
    spec: &ProtocolSpec,
    limits: &TimeConstraints,
    bracket: (f64, f64),
) -> Result<MinimalTime> {
    config.validate()?;
    spec.validate()?;
    if !(limits.max_f_sq > 0.0) {
        return Err(Error::invalid("constraints.max_f_sq", "must be positive"));
    }
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::invalid("bracket", "needs 0 < lower < upper"));
    }
    let Some(mut binding) = probe(config, spec, limits, lo)? else {
        return Ok(MinimalTime {
            tf_omega: lo,
            binding: Binding::LowerBracket,
            infeasible_below: None,
        });
    };
    if probe(config, spec, limits, hi)?.is_some() {
        return Err(Error::NoFeasiblePoint { upper: hi });
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= TIME_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match probe(config, spec, limits, mid)? {
            None => hi = mid,
            Some(b) => {
                lo = mid;
                binding = b;
            }
        }
    }
    Ok(MinimalTime {
        tf_omega: hi,
        binding,
        infeasible_below: Some(lo),
    })
}
