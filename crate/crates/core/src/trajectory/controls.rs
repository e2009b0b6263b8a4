use serde::Serialize;

use super::schedule::FrequencySchedule;
use crate::error::{Error, Infeasibility, Result};
use crate::model::{DerivedCoefficients, SystemConfig};

/// Relative slack on the intensity bound before a sample counts as infeasible.
const BOUND_SLACK: f64 = 1e-12;

/// Drive intensities f₁²(t), f₂²(t) on the schedule's sample grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlSchedule {
    pub t_f: f64,
    pub f1_sq: Vec<f64>,
    pub f2_sq: Vec<f64>,
}

impl ControlSchedule {
    pub fn len(&self) -> usize {
        self.f1_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f1_sq.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.t_f / (self.len() - 1) as f64
    }

    pub fn channel(&self, mode: usize) -> &[f64] {
        if mode == 0 {
            &self.f1_sq
        } else {
            &self.f2_sq
        }
    }

    /// ω²(1 + η₁f₁² + η₂f₂²) at every sample.
    pub fn reconstruct(&self, derived: &DerivedCoefficients) -> Vec<f64> {
        self.f1_sq
            .iter()
            .zip(&self.f2_sq)
            .map(|(a, b)| derived.omega_eff_sq_unchecked(*a, *b))
            .collect()
    }
}

fn strongest(derived: &DerivedCoefficients, positive: bool) -> Option<usize> {
    (0..derived.mode_count)
        .filter(|&i| if positive { derived.eta[i] > 0.0 } else { derived.eta[i] < 0.0 })
        .max_by(|&a, &b| derived.eta[a].abs().total_cmp(&derived.eta[b].abs()))
}

/// Inverts ω_eff² = ω²(1 + η₁f₁² + η₂f₂²) one mode at a time under f² ≤ 1.
pub fn controls_from_schedule(schedule: &FrequencySchedule, config: &SystemConfig) -> Result<ControlSchedule> {
    controls_with_bound(schedule, config, 1.0)
}

/// Same as [`controls_from_schedule`] with an arbitrary intensity bound.
///
/// Wherever ω_eff² exceeds ω² the mode with the largest positive η carries
/// the whole shift; below ω² the mode with the most negative η does. The
/// other channel is zero.
pub fn controls_with_bound(
    schedule: &FrequencySchedule,
    config: &SystemConfig,
    max_f_sq: f64,
) -> Result<ControlSchedule> {
    let derived = config.derived()?;
    let w2 = derived.omega_ang * derived.omega_ang;
    let up = strongest(&derived, true);
    let down = strongest(&derived, false);

    let n = schedule.len();
    let mut f = [vec![0.0; n], vec![0.0; n]];
    let mut missing: Option<(usize, f64, bool)> = None;
    let mut excess: Option<(usize, f64, usize)> = None;

    for (i, v) in schedule.values.iter().enumerate() {
        let u = v / w2 - 1.0;
        if u == 0.0 {
            continue;
        }
        let positive = u > 0.0;
        let Some(mode) = (if positive { up } else { down }) else {
            if missing.map_or(true, |(_, worst, _)| u.abs() > worst) {
                missing = Some((i, u.abs(), positive));
            }
            continue;
        };
        let need = u / derived.eta[mode];
        if need > max_f_sq * (1.0 + BOUND_SLACK) {
            if excess.map_or(true, |(_, worst, _)| need > worst) {
                excess = Some((i, need, mode));
            }
            continue;
        }
        f[mode][i] = need.min(max_f_sq);
    }

    if let Some((i, magnitude, positive)) = missing {
        return Err(Error::InfeasibleControl {
            time: schedule.time(i),
            required: magnitude,
            mode: None,
            reason: Infeasibility::MissingSign { positive },
        });
    }
    if let Some((i, need, mode)) = excess {
        return Err(Error::InfeasibleControl {
            time: schedule.time(i),
            required: need,
            mode: Some(mode),
            reason: Infeasibility::BoundExceeded,
        });
    }
    let [f1_sq, f2_sq] = f;
    Ok(ControlSchedule {
        t_f: schedule.t_f,
        f1_sq,
        f2_sq,
    })
}
