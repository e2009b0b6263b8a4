use std::sync::{Arc, OnceLock};

use super::ProtocolSpec;
use crate::error::{Error, Infeasibility, Result};
use crate::model::{bose_occupation, DerivedCoefficients, SystemConfig};
use crate::registry::{Named, Registry};

/// Start and end of a cooling stroke.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoints {
    /// Effective frequency at the start of the stroke, rad/s.
    pub omega0: f64,
    /// Effective frequency at the end of the stroke, rad/s.
    pub omega_f: f64,
    /// Occupation of the undriven resonator in equilibrium with the bath.
    pub n_bar_o: f64,
}

/// A cooling scenario: decides where the shortcut starts and ends.
pub trait CoolingProtocol: Named + Send + Sync {
    fn endpoints(&self, config: &SystemConfig, derived: &DerivedCoefficients, spec: &ProtocolSpec) -> Result<Endpoints>;
}

fn strongest(derived: &DerivedCoefficients, positive: bool) -> Option<f64> {
    derived.eta[..derived.mode_count]
        .iter()
        .copied()
        .filter(|e| if positive { *e > 0.0 } else { *e < 0.0 })
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
}

/// Ramp the bare resonator down to ω/R.
pub struct FastCooling;

impl Named for FastCooling {
    fn name(&self) -> &'static str {
        "fast-cooling"
    }
}

/// Drive amplitude that holds ω_eff = ω/R with a softening mode of stiffness η.
pub fn terminal_control(eta: f64, ratio_r: f64) -> f64 {
    ((1.0 - ratio_r.powi(-2)) / eta.abs()).sqrt()
}

impl CoolingProtocol for FastCooling {
    fn endpoints(&self, config: &SystemConfig, derived: &DerivedCoefficients, spec: &ProtocolSpec) -> Result<Endpoints> {
        let omega = derived.omega_ang;
        let t_f = spec.tf_omega / omega;
        let eta = strongest(derived, false).ok_or(Error::InfeasibleControl {
            time: t_f,
            required: 1.0 - spec.ratio_r.powi(-2),
            mode: None,
            reason: Infeasibility::MissingSign { positive: false },
        })?;
        let hold = terminal_control(eta, spec.ratio_r).powi(2);
        if hold > 1.0 {
            return Err(Error::InfeasibleControl {
                time: t_f,
                required: hold,
                mode: None,
                reason: Infeasibility::BoundExceeded,
            });
        }
        Ok(Endpoints {
            omega0: omega,
            omega_f: omega / spec.ratio_r,
            n_bar_o: bose_occupation(omega, config.mechanical.bath_temperature),
        })
    }
}

/// Stiffen to ω√(1 + η₁), let the resonator thermalize there, then return to ω.
pub struct GroundState;

impl Named for GroundState {
    fn name(&self) -> &'static str {
        "ground-state"
    }
}

impl CoolingProtocol for GroundState {
    fn endpoints(&self, config: &SystemConfig, derived: &DerivedCoefficients, spec: &ProtocolSpec) -> Result<Endpoints> {
        let omega = derived.omega_ang;
        let eta = strongest(derived, true).ok_or(Error::InfeasibleControl {
            time: 0.0,
            required: 1.0,
            mode: None,
            reason: Infeasibility::MissingSign { positive: true },
        })?;
        let omega0 = match spec.omega0_ratio {
            Some(ratio) => ratio * omega,
            None => omega * (1.0 + eta).sqrt(),
        };
        Ok(Endpoints {
            omega0,
            omega_f: omega,
            n_bar_o: bose_occupation(omega, config.mechanical.bath_temperature),
        })
    }
}

pub fn protocols() -> &'static Registry<dyn CoolingProtocol> {
    static REGISTRY: OnceLock<Registry<dyn CoolingProtocol>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        Registry::<dyn CoolingProtocol>::new("protocol")
            .with(Arc::new(FastCooling))
            .with(Arc::new(GroundState))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::presets;
    use approx::assert_relative_eq;

    #[test]
    fn terminal_control_oracle() {
        assert_eq!(terminal_control(-9.161, 1.0), 0.0);
        assert_relative_eq!(terminal_control(-9.161, 10.0), (0.99f64 / 9.161).sqrt(), max_relative = 1e-15);
        assert!((terminal_control(-9.161, 10.0) - 0.3287).abs() < 1e-4);
    }

    #[test]
    fn ground_state_endpoints() {
        let cfg = presets::ground_state();
        let d = cfg.derived().unwrap();
        let spec = ProtocolSpec::ground_state(0.6);
        let e = protocols().get("ground_state").unwrap().endpoints(&cfg, &d, &spec).unwrap();
        assert_relative_eq!(e.omega0 / d.omega_ang, (1.0 + d.eta[0]).sqrt(), max_relative = 1e-15);
        assert_eq!(e.omega_f, d.omega_ang);
        let rounded = ProtocolSpec {
            omega0_ratio: Some(3000.0),
            ..spec
        };
        let e = GroundState.endpoints(&cfg, &d, &rounded).unwrap();
        assert_eq!(e.omega0, 3000.0 * d.omega_ang);
    }

    #[test]
    fn fast_cooling_needs_softening_mode() {
        let cfg = presets::ground_state_single_mode();
        let d = cfg.derived().unwrap();
        let err = FastCooling.endpoints(&cfg, &d, &ProtocolSpec::fast_cooling(5.0, 10.0)).unwrap_err();
        assert!(matches!(err, Error::InfeasibleControl { .. }));
        // 1 - R⁻² < 1 < |η|, so any R works with the paper's softening mode.
        let cfg = presets::fast_cooling();
        let d = cfg.derived().unwrap();
        assert!(FastCooling.endpoints(&cfg, &d, &ProtocolSpec::fast_cooling(5.0, 1e6)).is_ok());
        let mut weak = presets::fast_cooling();
        weak.modes[0].drive_max_cyc = 1e8;
        let d = weak.derived().unwrap();
        assert!(FastCooling.endpoints(&weak, &d, &ProtocolSpec::fast_cooling(5.0, 10.0)).is_err());
    }
}
