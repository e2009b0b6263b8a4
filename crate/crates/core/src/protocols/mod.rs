//! End-to-end cooling runs: pick endpoints, design the shortcut, invert it into
//! drive intensities, audit them, and propagate the resonator state.

mod baselines;
mod fig2;
mod mintime;
mod variants;

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    mean_energy, occupation, propagate, propagate_damped, thermal_state, DampingSpec, IntegratorSettings,
};
use crate::error::{Error, Result};
use crate::model::{bose_occupation, effective_temperature, SystemConfig};
use crate::trajectory::{
    controls_from_schedule, designers, direct_ramp, validate, ControlSchedule, FrequencySchedule, ValidityReport,
    DEFAULT_DESIGNER, DEFAULT_SAMPLES, MIN_AUDIT_SAMPLES,
};

pub use baselines::{compare_baselines, BaselineRow};
pub use fig2::{reproduce_fig2, series, Fig2Dataset, Series, FIG2_DURATIONS};
pub use mintime::{minimal_time, Binding, MinimalTime, TimeConstraints, DEFAULT_BRACKET, MAX_BISECTIONS, TIME_TOLERANCE};
pub use variants::{protocols, terminal_control, CoolingProtocol, Endpoints, FastCooling, GroundState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    /// Registered protocol name.
    pub variant: String,
    /// Stroke duration in units of 1/ω.
    pub tf_omega: f64,
    /// Frequency reduction factor; fast cooling only.
    pub ratio_r: f64,
    pub include_damped_check: bool,
    pub include_baseline: bool,
    pub samples: usize,
    /// Registered schedule designer.
    pub designer: String,
    /// Starting frequency in units of ω, overriding ω√(1 + η₁) for ground-state runs.
    pub omega0_ratio: Option<f64>,
}

impl ProtocolSpec {
    pub fn ground_state(tf_omega: f64) -> Self {
        Self {
            variant: "ground-state".into(),
            tf_omega,
            ratio_r: 1.0,
            include_damped_check: false,
            include_baseline: false,
            samples: DEFAULT_SAMPLES,
            designer: DEFAULT_DESIGNER.into(),
            omega0_ratio: None,
        }
    }

    pub fn fast_cooling(tf_omega: f64, ratio_r: f64) -> Self {
        Self {
            variant: "fast-cooling".into(),
            ratio_r,
            ..Self::ground_state(tf_omega)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tf_omega.is_finite() && self.tf_omega > 0.0) {
            return Err(Error::invalid("protocol.tf_omega_units", "must be positive"));
        }
        if !(self.ratio_r.is_finite() && self.ratio_r >= 1.0) {
            return Err(Error::invalid("protocol.ratio_r", "must be at least 1"));
        }
        if self.samples < MIN_AUDIT_SAMPLES {
            return Err(Error::invalid(
                "protocol.samples",
                format!("must be at least {MIN_AUDIT_SAMPLES}"),
            ));
        }
        if let Some(r) = self.omega0_ratio {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::invalid("protocol.omega0_ratio", "must be positive"));
            }
        }
        protocols().get(&self.variant)?;
        designers().get(&self.designer)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub steps: usize,
    pub symplectic_residual: f64,
    pub refinement_delta: Option<f64>,
    pub stepper: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoolingReport {
    pub variant: String,
    /// Stroke duration, s.
    pub t_f: f64,
    pub tf_omega: f64,
    pub n_bar_o: f64,
    pub n_bar_i: f64,
    pub n_bar_f: f64,
    pub omega0: f64,
    pub omega_f: f64,
    pub energy_ratio: f64,
    /// K.
    pub t_eff_final: f64,
    /// √f² of the active channel at t_f.
    pub terminal_control: f64,
    pub validity: ValidityReport,
    pub damped_n_bar_f: Option<f64>,
    pub baseline_n_bar_f: Option<f64>,
    pub diagnostics: Diagnostics,
}

/// A finished run with the waveforms that produced it.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub report: CoolingReport,
    pub schedule: FrequencySchedule,
    pub controls: ControlSchedule,
}

/// Endpoints, schedule and controls for a spec, without propagation.
pub fn design_protocol(
    config: &SystemConfig,
    spec: &ProtocolSpec,
) -> Result<(Endpoints, FrequencySchedule, ControlSchedule)> {
    config.validate()?;
    spec.validate()?;
    let derived = config.derived()?;
    let endpoints = protocols().get(&spec.variant)?.endpoints(config, &derived, spec)?;
    let t_f = spec.tf_omega / derived.omega_ang;
    let schedule = designers()
        .get(&spec.designer)?
        .design(endpoints.omega0, endpoints.omega_f, t_f, spec.samples)?;
    let controls = controls_from_schedule(&schedule, config)?;
    Ok((endpoints, schedule, controls))
}

pub fn run_protocol(config: &SystemConfig, spec: &ProtocolSpec, settings: &IntegratorSettings) -> Result<ProtocolRun> {
    let (endpoints, schedule, controls) = design_protocol(config, spec)?;
    let mech = &config.mechanical;
    let (mass, omega, temperature) = (mech.mass, mech.omega(), mech.bath_temperature);
    let Endpoints { omega0, omega_f, n_bar_o } = endpoints;

    let validity = validate(&controls, config, &thermal_state(omega, temperature, mass))?;
    let initial = thermal_state(omega0, temperature, mass);
    let run = propagate(&initial, &schedule, mass, settings)?;
    let n_bar_i = occupation(&initial, omega0, mass);
    let n_bar_f = occupation(&run.state, omega_f, mass);

    let damped_n_bar_f = if spec.include_damped_check {
        let damping = DampingSpec {
            gamma: omega / mech.quality_factor,
            bath_occupation: bose_occupation(omega, temperature),
            omega_bath: omega,
        };
        let state = propagate_damped(&initial, &schedule, mass, &damping, settings)?;
        Some(occupation(&state, omega_f, mass))
    } else {
        None
    };
    let baseline_n_bar_f = if spec.include_baseline {
        let ramp = direct_ramp(omega0, omega_f, schedule.t_f, spec.samples)?;
        Some(occupation(&propagate(&initial, &ramp, mass, settings)?.state, omega_f, mass))
    } else {
        None
    };

    let last = controls.len() - 1;
    let report = CoolingReport {
        variant: spec.variant.replace('_', "-"),
        t_f: schedule.t_f,
        tf_omega: spec.tf_omega,
        n_bar_o,
        n_bar_i,
        n_bar_f,
        omega0,
        omega_f,
        energy_ratio: mean_energy(&run.state, omega_f, mass) / mean_energy(&initial, omega0, mass),
        t_eff_final: effective_temperature(n_bar_f, omega_f),
        terminal_control: controls.f1_sq[last].max(controls.f2_sq[last]).sqrt(),
        validity,
        damped_n_bar_f,
        baseline_n_bar_f,
        diagnostics: Diagnostics {
            steps: run.steps,
            symplectic_residual: run.symplectic_residual,
            refinement_delta: run.refinement_delta,
            stepper: run.stepper,
        },
    };
    Ok(ProtocolRun {
        report,
        schedule,
        controls,
    })
}

/// Fast cooling of the bare resonator from ω to ω/R in `t_f` seconds.
pub fn run_fast_cooling(
    config: &SystemConfig,
    ratio_r: f64,
    t_f: f64,
    settings: &IntegratorSettings,
) -> Result<CoolingReport> {
    let spec = ProtocolSpec::fast_cooling(t_f * config.mechanical.omega(), ratio_r);
    Ok(run_protocol(config, &spec, settings)?.report)
}

/// Return from ω√(1 + η₁) to ω in `t_f` seconds.
pub fn run_ground_state(config: &SystemConfig, t_f: f64, settings: &IntegratorSettings) -> Result<CoolingReport> {
    let spec = ProtocolSpec::ground_state(t_f * config.mechanical.omega());
    Ok(run_protocol(config, &spec, settings)?.report)
}
