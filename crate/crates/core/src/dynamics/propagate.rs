use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::state::GaussianState;
use super::stepper::{steppers, Stepper, DEFAULT_STEPPER};
use super::transfer::{Mat2, TransferMatrix};
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::integrate::step_count;
use crate::trajectory::FrequencySchedule;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub steps_per_period: usize,
    pub min_steps: usize,
    /// Repeat the run at half the step and report the difference.
    pub refinement_check: bool,
    /// Registered stepper name.
    pub method: String,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            steps_per_period: 200,
            min_steps: 20_000,
            refinement_check: false,
            method: DEFAULT_STEPPER.to_string(),
        }
    }
}

impl IntegratorSettings {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_period < 50 {
            return Err(Error::invalid("integrator.steps_per_period", "must be at least 50"));
        }
        if self.min_steps < 1000 {
            return Err(Error::invalid("integrator.min_steps", "must be at least 1000"));
        }
        steppers().get(&self.method)?;
        Ok(())
    }

    /// min(2π/(steps_per_period·ω_max), t_f/min_steps).
    pub fn max_step(&self, schedule: &FrequencySchedule) -> f64 {
        let per_period = TAU / (self.steps_per_period as f64 * schedule.omega_max());
        per_period.min(schedule.t_f / self.min_steps as f64)
    }

    pub fn step_count(&self, schedule: &FrequencySchedule) -> usize {
        step_count(schedule.t_f, self.max_step(schedule))
    }
}

/// Linear damping toward a thermal bath, used only for robustness checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DampingSpec {
    /// Energy damping rate ω/Q, rad/s.
    pub gamma: f64,
    /// Bath occupation at the bare frequency.
    pub bath_occupation: f64,
    /// Bare frequency entering the diffusion coefficient, rad/s.
    pub omega_bath: f64,
}

impl DampingSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::invalid("damping.gamma", "must be non-negative"));
        }
        if !(self.bath_occupation >= 0.0) {
            return Err(Error::invalid("damping.bath_occupation", "must be non-negative"));
        }
        if !(self.omega_bath > 0.0) {
            return Err(Error::invalid("damping.omega_bath", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Propagation {
    pub state: GaussianState,
    pub transfer: TransferMatrix,
    pub steps: usize,
    pub symplectic_residual: f64,
    /// max |S(h) - S(h/2)| / max |S(h/2)| when a refinement check was requested.
    pub refinement_delta: Option<f64>,
    pub stepper: &'static str,
}

/// Scales used internally: time in 1/ω_r, x in √(ħ/2mω_r), p in √(ħmω_r/2).
#[derive(Debug, Clone, Copy)]
struct Units {
    omega: f64,
    x: f64,
    p: f64,
}

impl Units {
    fn new(omega: f64, mass: f64) -> Self {
        Self {
            omega,
            x: (HBAR / (2.0 * mass * omega)).sqrt(),
            p: (HBAR * mass * omega / 2.0).sqrt(),
        }
    }
}

fn check_inputs(schedule: &FrequencySchedule, mass: f64, settings: &IntegratorSettings) -> Result<Units> {
    settings.validate()?;
    if !(mass > 0.0) {
        return Err(Error::invalid("mass", "must be positive"));
    }
    if !(schedule.t_f > 0.0 && schedule.omega_f > 0.0) {
        return Err(Error::invalid("schedule", "needs positive duration and final frequency"));
    }
    Ok(Units::new(schedule.omega_f, mass))
}

/// Steps the flow with generator [[0, 1], [-ω_eff²/ω_r², -γ/ω_r]] over the
/// whole schedule, handing each one-step propagator to `visit`.
fn sweep(
    schedule: &FrequencySchedule,
    units: Units,
    damping: f64,
    steps: usize,
    stepper: &dyn Stepper,
    mut visit: impl FnMut(usize, f64, &Mat2),
) {
    let w2 = units.omega * units.omega;
    let generator = |tau: f64| Mat2([[0.0, 1.0], [-schedule.eval(tau / units.omega) / w2, -damping]]);
    let h = units.omega * schedule.t_f / steps as f64;
    for k in 0..steps {
        let m = stepper.step(&generator, k as f64 * h, h);
        visit(k + 1, (k + 1) as f64 * h / units.omega, &m);
    }
}

fn scaled_transfer(schedule: &FrequencySchedule, units: Units, steps: usize, stepper: &dyn Stepper) -> Mat2 {
    let mut s = Mat2::IDENTITY;
    sweep(schedule, units, 0.0, steps, stepper, |_, _, m| s = *m * s);
    s
}

fn evolve(mean: [f64; 2], cov: [f64; 3], s: &Mat2) -> ([f64; 2], [f64; 3]) {
    let sigma = Mat2([[cov[0], cov[1]], [cov[1], cov[2]]]);
    let out = *s * sigma * s.transpose();
    (s.apply(mean), [out.0[0][0], 0.5 * (out.0[0][1] + out.0[1][0]), out.0[1][1]])
}

/// Exact Gaussian evolution under H = p²/2m + mω_eff²(t)x²/2.
pub fn propagate(
    state: &GaussianState,
    schedule: &FrequencySchedule,
    mass: f64,
    settings: &IntegratorSettings,
) -> Result<Propagation> {
    propagate_observed(state, schedule, mass, settings, 0, |_, _| {})
}

/// [`propagate`], additionally reporting the state every `stride` steps
/// (and at both ends) to `observe`. A stride of zero observes only the ends.
pub fn propagate_observed(
    state: &GaussianState,
    schedule: &FrequencySchedule,
    mass: f64,
    settings: &IntegratorSettings,
    stride: usize,
    mut observe: impl FnMut(f64, &GaussianState),
) -> Result<Propagation> {
    let units = check_inputs(schedule, mass, settings)?;
    let stepper = steppers().get(&settings.method)?;
    let steps = settings.step_count(schedule);
    let (mean0, cov0) = state.to_scaled(units.x, units.p);

    observe(0.0, state);
    let mut s = Mat2::IDENTITY;
    sweep(schedule, units, 0.0, steps, stepper.as_ref(), |k, t, m| {
        s = *m * s;
        if stride > 0 && k % stride == 0 && k != steps {
            let (mean, cov) = evolve(mean0, cov0, &s);
            observe(t, &GaussianState::from_scaled(mean, cov, units.x, units.p));
        }
    });
    let (mean, cov) = evolve(mean0, cov0, &s);
    let final_state = GaussianState::from_scaled(mean, cov, units.x, units.p);
    observe(schedule.t_f, &final_state);

    let transfer = TransferMatrix::from_scaled(&s, units.x, units.p);
    let symplectic_residual = (s.det() - 1.0).abs();
    if !(symplectic_residual <= TransferMatrix::SYMPLECTIC_TOLERANCE) {
        return Err(Error::SymplecticDrift {
            residual: symplectic_residual,
        });
    }
    let refinement_delta = settings.refinement_check.then(|| {
        let fine = scaled_transfer(schedule, units, 2 * steps, stepper.as_ref());
        (s - fine).max_abs() / fine.max_abs()
    });
    Ok(Propagation {
        state: final_state,
        transfer,
        steps,
        symplectic_residual,
        refinement_delta,
        stepper: stepper.name(),
    })
}

/// Covariance flow σ̇ = Aσ + σAᵀ + D with momentum damping γ and diffusion
/// D_pp = 2γmħω_bath(n̄_th + 1/2).
///
/// The homogeneous part uses the configured stepper, so with γ = 0 this is the
/// same computation as [`propagate`]. Diffusion accumulated over one step is
/// taken with the trapezoidal rule.
pub fn propagate_damped(
    state: &GaussianState,
    schedule: &FrequencySchedule,
    mass: f64,
    damping: &DampingSpec,
    settings: &IntegratorSettings,
) -> Result<GaussianState> {
    damping.validate()?;
    let units = check_inputs(schedule, mass, settings)?;
    let stepper = steppers().get(&settings.method)?;
    let steps = settings.step_count(schedule);
    let g = damping.gamma / units.omega;
    let h = units.omega * schedule.t_f / steps as f64;
    let diffusion = 4.0 * g * (damping.omega_bath / units.omega) * (damping.bath_occupation + 0.5);
    let d = Mat2([[0.0, 0.0], [0.0, diffusion]]);

    let (mut mean, cov) = state.to_scaled(units.x, units.p);
    let mut sigma = Mat2([[cov[0], cov[1]], [cov[1], cov[2]]]);
    sweep(schedule, units, g, steps, stepper.as_ref(), |_, _, m| {
        mean = m.apply(mean);
        sigma = *m * sigma * m.transpose();
        if diffusion != 0.0 {
            sigma = sigma + (*m * d * m.transpose() + d).scale(0.5 * h);
        }
    });
    let cov = [sigma.0[0][0], 0.5 * (sigma.0[0][1] + sigma.0[1][0]), sigma.0[1][1]];
    Ok(GaussianState::from_scaled(mean, cov, units.x, units.p))
}
