//! Shortcut-to-adiabaticity cooling of an optomechanical resonator.
//!
//! The resonator's effective frequency is set by radiation pressure from up to
//! two detuned cavity modes. [`trajectory`] designs a frequency schedule that
//! preserves phonon populations, inverts it into bounded drive intensities and
//! audits the approximations behind it; [`dynamics`] propagates Gaussian states
//! through the schedule; [`protocols`] ties both into complete cooling runs.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod integrate;
pub mod model;
pub mod protocols;
pub mod registry;
pub mod trajectory;

pub use error::{Error, Infeasibility, Result};
