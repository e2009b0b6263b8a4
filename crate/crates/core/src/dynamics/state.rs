use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::bose_occupation;

/// Relative slack allowed below the Heisenberg bound.
pub const HEISENBERG_SLACK: f64 = 1e-9;

/// Gaussian state of the resonator quadratures, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianState {
    pub mean_x: f64,
    pub mean_p: f64,
    pub cov_xx: f64,
    pub cov_xp: f64,
    pub cov_pp: f64,
}

impl GaussianState {
    pub fn new(mean_x: f64, mean_p: f64, cov_xx: f64, cov_xp: f64, cov_pp: f64) -> Result<Self> {
        let state = Self {
            mean_x,
            mean_p,
            cov_xx,
            cov_xp,
            cov_pp,
        };
        if !(cov_xx > 0.0 && cov_pp > 0.0) {
            return Err(Error::invalid("covariance", "diagonal entries must be positive"));
        }
        if state.heisenberg_ratio() < 1.0 - HEISENBERG_SLACK {
            return Err(Error::invalid("covariance", "violates the uncertainty relation"));
        }
        Ok(state)
    }

    pub fn det(&self) -> f64 {
        self.cov_xx * self.cov_pp - self.cov_xp * self.cov_xp
    }

    /// det σ / (ħ/2)²; one for pure states.
    pub fn heisenberg_ratio(&self) -> f64 {
        let scale = HBAR / 2.0;
        (self.cov_xx / scale) * (self.cov_pp / scale) - (self.cov_xp / scale) * (self.cov_xp / scale)
    }

    pub fn purity(&self) -> f64 {
        1.0 / self.heisenberg_ratio().sqrt()
    }

    pub(crate) fn to_scaled(self, x_r: f64, p_r: f64) -> ([f64; 2], [f64; 3]) {
        (
            [self.mean_x / x_r, self.mean_p / p_r],
            [
                self.cov_xx / (x_r * x_r),
                self.cov_xp / (x_r * p_r),
                self.cov_pp / (p_r * p_r),
            ],
        )
    }

    pub(crate) fn from_scaled(mean: [f64; 2], cov: [f64; 3], x_r: f64, p_r: f64) -> Self {
        Self {
            mean_x: mean[0] * x_r,
            mean_p: mean[1] * p_r,
            cov_xx: cov[0] * x_r * x_r,
            cov_xp: cov[1] * x_r * p_r,
            cov_pp: cov[2] * p_r * p_r,
        }
    }
}

/// Zero-mean thermal state of an oscillator at `omega_ref`.
pub fn thermal_state(omega_ref: f64, temperature: f64, mass: f64) -> GaussianState {
    let spread = 2.0 * bose_occupation(omega_ref, temperature) + 1.0;
    GaussianState {
        mean_x: 0.0,
        mean_p: 0.0,
        cov_xx: HBAR / (2.0 * mass * omega_ref) * spread,
        cov_xp: 0.0,
        cov_pp: mass * HBAR * omega_ref / 2.0 * spread,
    }
}

/// Mean phonon number relative to an oscillator at `omega_ref`.
pub fn occupation(state: &GaussianState, omega_ref: f64, mass: f64) -> f64 {
    let xx = state.cov_xx + state.mean_x * state.mean_x;
    let pp = state.cov_pp + state.mean_p * state.mean_p;
    (mass * omega_ref * xx + pp / (mass * omega_ref)) / (2.0 * HBAR) - 0.5
}

/// ⟨p²/2m + mω²x²/2⟩.
pub fn mean_energy(state: &GaussianState, omega_ref: f64, mass: f64) -> f64 {
    let xx = state.cov_xx + state.mean_x * state.mean_x;
    let pp = state.cov_pp + state.mean_p * state.mean_p;
    pp / (2.0 * mass) + mass * omega_ref * omega_ref * xx / 2.0
}

/// ⟨I⟩ for I = mω₀²x²/(2b²) + (bp - mḃx)²/(2m).
pub fn invariant_expectation(state: &GaussianState, b: f64, bdot: f64, omega0: f64, mass: f64) -> f64 {
    let xx = state.cov_xx + state.mean_x * state.mean_x;
    let pp = state.cov_pp + state.mean_p * state.mean_p;
    let xp = state.cov_xp + state.mean_x * state.mean_p;
    mass * omega0 * omega0 * xx / (2.0 * b * b)
        + (b * b * pp - 2.0 * mass * b * bdot * xp + mass * mass * bdot * bdot * xx) / (2.0 * mass)
}
