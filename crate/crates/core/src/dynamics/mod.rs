//! Gaussian-state propagation of the time-dependent, possibly inverted,
//! harmonic oscillator.
//!
//! Propagation works on the 2×2 phase-space transfer matrix, which is exact
//! for quadratic Hamiltonians and indifferent to how many phonons the state
//! carries.

mod propagate;
mod state;
mod stepper;
mod transfer;

pub use propagate::{
    propagate, propagate_damped, propagate_observed, DampingSpec, IntegratorSettings, Propagation,
};
pub use state::{
    invariant_expectation, mean_energy, occupation, thermal_state, GaussianState, HEISENBERG_SLACK,
};
pub use stepper::{steppers, Magnus4, Rk4, Stepper, DEFAULT_STEPPER};
pub use transfer::{Mat2, TransferMatrix};
