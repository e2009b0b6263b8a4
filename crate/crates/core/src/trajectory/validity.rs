use serde::Serialize;

use super::controls::ControlSchedule;
use crate::dynamics::GaussianState;
use crate::error::{Error, Result};
use crate::model::SystemConfig;

/// Samples with f² below this are left out of the ḟ/f audit.
pub const BO_FLOOR: f64 = 1e-6;
pub const MIN_AUDIT_SAMPLES: usize = 101;

/// Ratios behind the adiabatic-elimination assumptions. Thresholds are left
/// to the caller.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub max_f1_sq: f64,
    pub max_f2_sq: f64,
    /// max |ḟ_i/f_i| / |Δ_i| per configured mode.
    pub max_bo_ratio: Vec<f64>,
    pub bo_floor: f64,
    /// min ω_eff²/ω².
    pub min_omega_eff_sq_ratio: f64,
    /// max_i G_i x_rms / |Δ_i| for the reference state.
    pub g_x_over_delta: f64,
    pub kappa_over_delta: Vec<f64>,
    pub feasible: bool,
}

impl ValidityReport {
    pub fn worst_bo_ratio(&self) -> f64 {
        self.max_bo_ratio.iter().copied().fold(0.0, f64::max)
    }

    pub fn worst_kappa_over_delta(&self) -> f64 {
        self.kappa_over_delta.iter().copied().fold(0.0, f64::max)
    }
}

/// Largest |d(f²)/dt| / (2f²), using central differences in the interior.
fn max_log_rate(f_sq: &[f64], dt: f64) -> f64 {
    let n = f_sq.len();
    (0..n)
        .filter(|&i| f_sq[i] >= BO_FLOOR)
        .map(|i| {
            let slope = match i {
                0 => (f_sq[1] - f_sq[0]) / dt,
                i if i == n - 1 => (f_sq[i] - f_sq[i - 1]) / dt,
                i => (f_sq[i + 1] - f_sq[i - 1]) / (2.0 * dt),
            };
            (slope / (2.0 * f_sq[i])).abs()
        })
        .fold(0.0, f64::max)
}

pub fn validate(
    controls: &ControlSchedule,
    config: &SystemConfig,
    reference_state: &GaussianState,
) -> Result<ValidityReport> {
    if controls.len() < MIN_AUDIT_SAMPLES {
        return Err(Error::invalid(
            "controls",
            format!("at least {MIN_AUDIT_SAMPLES} samples are required"),
        ));
    }
    let derived = config.derived()?;
    let dt = controls.dt();
    let max_bo_ratio = (0..derived.mode_count)
        .map(|i| max_log_rate(controls.channel(i), dt) / derived.detuning_ang[i].abs())
        .collect();
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let max_f1_sq = max(&controls.f1_sq);
    let max_f2_sq = max(&controls.f2_sq);
    let min_omega_eff_sq_ratio = controls
        .f1_sq
        .iter()
        .zip(&controls.f2_sq)
        .map(|(a, b)| 1.0 + derived.eta[0] * a + derived.eta[1] * b)
        .fold(f64::INFINITY, f64::min);
    let x_rms = reference_state.cov_xx.sqrt();
    let g_x_over_delta = (0..derived.mode_count)
        .map(|i| derived.g[i] * x_rms / derived.detuning_ang[i].abs())
        .fold(0.0, f64::max);
    Ok(ValidityReport {
        max_f1_sq,
        max_f2_sq,
        max_bo_ratio,
        bo_floor: BO_FLOOR,
        min_omega_eff_sq_ratio,
        g_x_over_delta,
        kappa_over_delta: config.kappa_over_delta(),
        feasible: max_f1_sq <= 1.0 && max_f2_sq <= 1.0,
    })
}
