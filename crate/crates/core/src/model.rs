//! Physical description of the resonator and its driven cavities, plus the
//! closed-form quantities that follow from it.
//!
//! Every frequency in the configuration types is cyclic (Hz, i.e. ω/2π).
//! [`DerivedCoefficients`] is the only place where they become angular.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::constants::{C_LIGHT, HBAR, K_B};
use crate::error::{Error, Result};

/// Above this |Gx/Δ| the displaced-frame expansion is considered broken.
pub const POLE_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicalOscillator {
    /// Effective mass, kg.
    pub mass: f64,
    /// Bare frequency ω/2π, Hz.
    pub freq_cyc: f64,
    pub quality_factor: f64,
    /// Bath temperature, K.
    pub bath_temperature: f64,
}

impl MechanicalOscillator {
    pub const DEFAULT_QUALITY_FACTOR: f64 = 1e5;

    pub fn omega(&self) -> f64 {
        TAU * self.freq_cyc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalMode {
    /// Optical frequency ω_i/2π, Hz.
    pub freq_cyc: f64,
    /// Signed detuning Δ_i/2π = (ω_i - ν_i)/2π, Hz.
    pub detuning_cyc: f64,
    /// Maximum drive amplitude ξ_i/2π, Hz.
    pub drive_max_cyc: f64,
    /// Cavity decay κ/2π, Hz.
    pub decay_cyc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    /// Arm length, m.
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub mechanical: MechanicalOscillator,
    pub geometry: CavityGeometry,
    /// One or two driven optical modes.
    pub modes: Vec<OpticalMode>,
}

fn require(cond: bool, field: impl Into<String>, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(field, reason))
    }
}

impl SystemConfig {
    pub fn new(
        mechanical: MechanicalOscillator,
        geometry: CavityGeometry,
        modes: Vec<OpticalMode>,
    ) -> Result<Self> {
        let config = Self {
            mechanical,
            geometry,
            modes,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.mechanical;
        require(m.mass.is_finite() && m.mass > 0.0, "mechanical.mass", "must be positive")?;
        require(m.freq_cyc.is_finite() && m.freq_cyc > 0.0, "mechanical.freq", "must be positive")?;
        require(
            m.quality_factor.is_finite() && m.quality_factor > 0.0,
            "mechanical.quality_factor",
            "must be positive",
        )?;
        require(
            m.bath_temperature.is_finite() && m.bath_temperature >= 0.0,
            "mechanical.bath_temperature",
            "must be non-negative",
        )?;
        require(
            self.geometry.length.is_finite() && self.geometry.length > 0.0,
            "cavity.length",
            "must be positive",
        )?;
        require(
            (1..=2).contains(&self.modes.len()),
            "modes",
            "one or two optical modes are required",
        )?;
        for (i, mode) in self.modes.iter().enumerate() {
            let field = |name: &str| format!("modes[{i}].{name}");
            require(mode.freq_cyc.is_finite() && mode.freq_cyc > 0.0, field("freq"), "must be positive")?;
            require(
                mode.detuning_cyc.is_finite() && mode.detuning_cyc != 0.0,
                field("detuning"),
                "must be nonzero",
            )?;
            require(
                mode.drive_max_cyc.is_finite() && mode.drive_max_cyc >= 0.0,
                field("drive_max"),
                "must be non-negative",
            )?;
            require(mode.decay_cyc.is_finite() && mode.decay_cyc > 0.0, field("decay"), "must be positive")?;
        }
        Ok(())
    }

    pub fn derived(&self) -> Result<DerivedCoefficients> {
        DerivedCoefficients::new(self)
    }

    /// κ_i/|Δ_i| per configured mode. Audited, never enforced.
    pub fn kappa_over_delta(&self) -> Vec<f64> {
        self.modes
            .iter()
            .map(|m| m.decay_cyc / m.detuning_cyc.abs())
            .collect()
    }

    fn mode(&self, index: usize) -> Result<&OpticalMode> {
        self.modes
            .get(index)
            .ok_or_else(|| Error::invalid("mode_index", format!("no mode {index} configured")))
    }
}

/// Angular-unit quantities computed once from a [`SystemConfig`].
///
/// Single-mode systems are represented as two-mode systems whose second
/// stiffness coefficient is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedCoefficients {
    /// Bare mechanical frequency ω, rad/s.
    pub omega_ang: f64,
    pub mass: f64,
    /// √(ħ/2mω), m.
    pub x_zpf: f64,
    /// √(ħmω/2), kg m/s.
    pub p_zpf: f64,
    /// Optomechanical couplings G_i = ω_i/L, rad s⁻¹ m⁻¹.
    pub g: [f64; 2],
    /// Stiffness coefficients η_i.
    pub eta: [f64; 2],
    /// Δ_i, rad/s (zero for an absent mode).
    pub detuning_ang: [f64; 2],
    pub mode_count: usize,
}

impl DerivedCoefficients {
    pub fn new(config: &SystemConfig) -> Result<Self> {
        config.validate()?;
        let mass = config.mechanical.mass;
        let omega = TAU * config.mechanical.freq_cyc;
        let length = config.geometry.length;
        let mut g = [0.0; 2];
        let mut eta = [0.0; 2];
        let mut detuning_ang = [0.0; 2];
        for (i, mode) in config.modes.iter().enumerate() {
            let optical = TAU * mode.freq_cyc;
            let detuning = TAU * mode.detuning_cyc;
            let drive = TAU * mode.drive_max_cyc;
            g[i] = optical / length;
            detuning_ang[i] = detuning;
            eta[i] = -4.0 * HBAR * drive * drive * optical * optical
                / (mass * omega * omega * detuning.powi(3) * length * length);
        }
        Ok(Self {
            omega_ang: omega,
            mass,
            x_zpf: (HBAR / (2.0 * mass * omega)).sqrt(),
            p_zpf: (HBAR * mass * omega / 2.0).sqrt(),
            g,
            eta,
            detuning_ang,
            mode_count: config.modes.len(),
        })
    }

    /// ω²(1 + η₁f₁² + η₂f₂²) without range checks.
    pub fn omega_eff_sq_unchecked(&self, f1_sq: f64, f2_sq: f64) -> f64 {
        self.omega_ang * self.omega_ang * (1.0 + self.eta[0] * f1_sq + self.eta[1] * f2_sq)
    }
}

/// η_i for one configured mode.
pub fn eta_coefficient(config: &SystemConfig, mode_index: usize) -> Result<f64> {
    config.mode(mode_index)?;
    Ok(config.derived()?.eta[mode_index])
}

/// Effective squared frequency for the given drive intensities; may be negative.
pub fn omega_eff_sq(config: &SystemConfig, f1_sq: f64, f2_sq: f64) -> Result<f64> {
    let derived = config.derived()?;
    for (mode, value) in [(0, f1_sq), (1, f2_sq)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::ControlOutOfRange { mode, value });
        }
    }
    if derived.mode_count == 1 && f2_sq != 0.0 {
        return Err(Error::ControlOutOfRange { mode: 1, value: f2_sq });
    }
    Ok(derived.omega_eff_sq_unchecked(f1_sq, f2_sq))
}

/// Bose-Einstein occupation 1/(exp(ħω/k_BT) - 1); zero at T = 0.
pub fn bose_occupation(omega_ref: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega_ref / (K_B * temperature);
    1.0 / x.exp_m1()
}

/// T_eff = ħ n̄ ω_ref / k_B.
pub fn effective_temperature(n_bar: f64, omega_ref: f64) -> f64 {
    HBAR * n_bar * omega_ref / K_B
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityAmplitude {
    /// Steady-state amplitude of the `a` cavity, -ξ/(Δ - Gx). Real because κ is neglected.
    pub alpha: f64,
    pub photons: f64,
}

fn pole_ratio(derived: &DerivedCoefficients, mode_index: usize, x: f64) -> Result<f64> {
    let ratio = derived.g[mode_index] * x / derived.detuning_ang[mode_index];
    if ratio.abs() > POLE_LIMIT * (1.0 + 1e-12) {
        return Err(Error::PoleProximity { ratio: ratio.abs() });
    }
    Ok(ratio)
}

pub fn steady_cavity_amplitude(
    config: &SystemConfig,
    mode_index: usize,
    f: f64,
    x: f64,
) -> Result<CavityAmplitude> {
    let mode = config.mode(mode_index)?;
    let derived = config.derived()?;
    pole_ratio(&derived, mode_index, x)?;
    let xi = TAU * mode.drive_max_cyc * f;
    let alpha = -xi / (derived.detuning_ang[mode_index] - derived.g[mode_index] * x);
    Ok(CavityAmplitude {
        alpha,
        photons: alpha * alpha,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiationPotential {
    /// c₀(x) summed over both sub-cavities, J.
    pub exact: f64,
    /// Quadratic expansion of c₀, J.
    pub quadratic: f64,
    /// |exact - quadratic| relative to the x = 0 value.
    pub relative_error: f64,
}

/// Radiation-pressure potential of one symmetric mode pair at displacement `x`.
pub fn radiation_potential(
    config: &SystemConfig,
    mode_index: usize,
    f: f64,
    x: f64,
) -> Result<RadiationPotential> {
    let mode = config.mode(mode_index)?;
    let derived = config.derived()?;
    let ratio = pole_ratio(&derived, mode_index, x)?;
    let xi = TAU * mode.drive_max_cyc * f;
    let delta = derived.detuning_ang[mode_index];
    let gx = derived.g[mode_index] * x;
    let leading = -2.0 * HBAR * xi * xi / delta;
    let exact = -2.0 * HBAR * delta * xi * xi / (delta * delta - gx * gx);
    let quadratic = leading * (1.0 + ratio * ratio);
    let relative_error = if leading == 0.0 {
        0.0
    } else {
        ((exact - quadratic) / leading).abs()
    };
    Ok(RadiationPotential {
        exact,
        quadratic,
        relative_error,
    })
}

/// Constant energy offset -2ħξ²/Δ of a driven mode pair. Dropped from all dynamics.
pub fn constant_shift(config: &SystemConfig, mode_index: usize, f: f64) -> Result<f64> {
    let mode = config.mode(mode_index)?;
    let derived = config.derived()?;
    let xi = TAU * mode.drive_max_cyc * f;
    Ok(-2.0 * HBAR * xi * xi / derived.detuning_ang[mode_index])
}

/// Peak optical input power ħω_opt ξ²/(2κ), W.
pub fn input_power(mode: &OpticalMode) -> f64 {
    let optical = TAU * mode.freq_cyc;
    let drive = TAU * mode.drive_max_cyc;
    let kappa = TAU * mode.decay_cyc;
    HBAR * optical * drive * drive / (2.0 * kappa)
}

/// Cavity finesse πc/(2Lκ).
pub fn finesse(geometry: &CavityGeometry, decay_cyc: f64) -> f64 {
    PI * C_LIGHT / (2.0 * geometry.length * TAU * decay_cyc)
}

/// Reference parameter sets used throughout the examples and tests.
pub mod presets {
    use super::*;

    pub fn resonator() -> MechanicalOscillator {
        MechanicalOscillator {
            mass: 50e-15,
            freq_cyc: 134e3,
            quality_factor: MechanicalOscillator::DEFAULT_QUALITY_FACTOR,
            bath_temperature: 20e-3,
        }
    }

    pub fn geometry() -> CavityGeometry {
        CavityGeometry { length: 2e-3 }
    }

    /// Weak drive below resonance (Δ > 0): softens the resonator, η ≈ -9.
    pub fn softening_mode() -> OpticalMode {
        OpticalMode {
            freq_cyc: 7e14,
            detuning_cyc: 1e7,
            drive_max_cyc: 1e9,
            decay_cyc: 1e6,
        }
    }

    /// Strong drive above resonance (Δ < 0): stiffens the resonator, η ≈ 9×10⁶.
    pub fn stiffening_mode() -> OpticalMode {
        OpticalMode {
            freq_cyc: 7e14,
            detuning_cyc: -1e7,
            drive_max_cyc: 1e12,
            decay_cyc: 1e6,
        }
    }

    /// Second optical mode with Δ > 0, supplying negative stiffness, η ≈ -670.
    pub fn inverting_mode() -> OpticalMode {
        OpticalMode {
            freq_cyc: 6e14,
            detuning_cyc: 1e7,
            drive_max_cyc: 1e10,
            decay_cyc: 1e6,
        }
    }

    pub fn fast_cooling() -> SystemConfig {
        SystemConfig {
            mechanical: resonator(),
            geometry: geometry(),
            modes: vec![softening_mode()],
        }
    }

    pub fn ground_state() -> SystemConfig {
        SystemConfig {
            mechanical: resonator(),
            geometry: geometry(),
            modes: vec![stiffening_mode(), inverting_mode()],
        }
    }

    pub fn ground_state_single_mode() -> SystemConfig {
        SystemConfig {
            mechanical: resonator(),
            geometry: geometry(),
            modes: vec![stiffening_mode()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::presets::*;
    use super::*;
    use approx::assert_relative_eq;

    // Independent single-expression oracle in SI, all conversions inline.
    fn eta_oracle(opt_hz: f64, det_hz: f64, drive_hz: f64) -> f64 {
        let tp = 2.0 * std::f64::consts::PI;
        -4.0 * 1.054571817e-34 * (tp * drive_hz).powi(2) * (tp * opt_hz).powi(2)
            / (50e-15 * (tp * 134e3).powi(2) * (tp * det_hz).powi(3) * 2e-3f64.powi(2))
    }

    #[test]
    fn eta_single_mode_matches_oracle() {
        let eta = eta_coefficient(&fast_cooling(), 0).unwrap();
        assert_relative_eq!(eta, eta_oracle(7e14, 1e7, 1e9), max_relative = 1e-12);
        assert_relative_eq!(eta, -9.161, max_relative = 5e-3);
        assert!((eta - -9.0).abs() < 0.5);
    }

    #[test]
    fn eta_two_mode_set() {
        let cfg = ground_state();
        let eta1 = eta_coefficient(&cfg, 0).unwrap();
        let eta2 = eta_coefficient(&cfg, 1).unwrap();
        assert_relative_eq!(eta1, eta_oracle(7e14, -1e7, 1e12), max_relative = 1e-12);
        assert_relative_eq!(eta2, eta_oracle(6e14, 1e7, 1e10), max_relative = 1e-12);
        assert_relative_eq!(eta1, 9e6, max_relative = 0.05);
        assert_relative_eq!(eta2, -670.0, max_relative = 0.01);
    }

    #[test]
    fn eta_zero_without_drive() {
        let mut cfg = fast_cooling();
        cfg.modes[0].drive_max_cyc = 0.0;
        assert_eq!(eta_coefficient(&cfg, 0).unwrap(), 0.0);
    }

    #[test]
    fn eta_rejects_missing_mode() {
        assert!(eta_coefficient(&fast_cooling(), 1).is_err());
    }

    #[test]
    fn omega_eff_sq_cases() {
        let cfg = ground_state();
        let d = cfg.derived().unwrap();
        let w2 = d.omega_ang * d.omega_ang;
        assert_eq!(omega_eff_sq(&cfg, 0.0, 0.0).unwrap(), w2);
        let top = omega_eff_sq(&cfg, 1.0, 0.0).unwrap();
        assert_relative_eq!(top.sqrt() / d.omega_ang, (1.0 + d.eta[0]).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(top.sqrt() / d.omega_ang, 3026.6, max_relative = 1e-4);
        let inverted = omega_eff_sq(&cfg, 0.0, 1.0).unwrap();
        assert!(inverted < 0.0);
        assert_relative_eq!(inverted, w2 * (1.0 + d.eta[1]), max_relative = 1e-14);
        assert!(matches!(
            omega_eff_sq(&cfg, 1.2, 0.0),
            Err(Error::ControlOutOfRange { mode: 0, .. })
        ));
        assert!(omega_eff_sq(&fast_cooling(), 0.0, 0.5).is_err());
    }

    #[test]
    fn bose_values() {
        let w = TAU * 134e3;
        // expm1 oracle: x = ħω/k_BT written out independently.
        let x = 1.054571817e-34 * w / (1.380649e-23 * 0.02);
        assert_relative_eq!(x, 3.2154e-4, max_relative = 1e-4);
        let n = bose_occupation(w, 0.02);
        assert_relative_eq!(n, 1.0 / x.exp_m1(), max_relative = 1e-15);
        assert_relative_eq!(n, 3109.5, max_relative = 1e-3);
        assert!((n - 3200.0).abs() / 3200.0 < 0.05);
        assert_eq!(bose_occupation(w, 0.0), 0.0);
        let n_i = bose_occupation(3026.8 * w, 0.02);
        assert_relative_eq!(n_i, 0.607, max_relative = 1e-2);
    }

    #[test]
    fn effective_temperature_values() {
        let w = TAU * 134e3;
        assert_eq!(effective_temperature(0.0, w), 0.0);
        assert_relative_eq!(effective_temperature(1.0, w), 6.43e-6, max_relative = 1e-3);
        let t = effective_temperature(3109.5, w / 10.0);
        assert_relative_eq!(t, 2.0e-3, max_relative = 1e-3);
    }

    #[test]
    fn cavity_amplitude_cases() {
        let cfg = ground_state();
        let at_rest = steady_cavity_amplitude(&cfg, 0, 1.0, 0.0).unwrap();
        assert_relative_eq!(at_rest.alpha, -1e12 / -1e7, max_relative = 1e-14);
        assert_relative_eq!(at_rest.photons, 1.0e10, max_relative = 1e-12);

        let d = cfg.derived().unwrap();
        let x_half = d.detuning_ang[0] / (2.0 * d.g[0]);
        let half = steady_cavity_amplitude(&cfg, 0, 1.0, x_half).unwrap();
        assert_relative_eq!(half.alpha.abs(), 2.0 * at_rest.alpha.abs(), max_relative = 1e-12);

        assert!(matches!(
            steady_cavity_amplitude(&cfg, 0, 1.0, 1.5 * x_half),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn radiation_potential_expansion() {
        let cfg = fast_cooling();
        let d = cfg.derived().unwrap();
        let at_rest = radiation_potential(&cfg, 0, 1.0, 0.0).unwrap();
        assert_eq!(at_rest.exact, at_rest.quadratic);
        assert_eq!(at_rest.relative_error, 0.0);
        assert_relative_eq!(at_rest.exact, constant_shift(&cfg, 0, 1.0).unwrap(), max_relative = 1e-14);

        let x_for = |r: f64| r * d.detuning_ang[0] / d.g[0];
        // Series-remainder oracle: r⁴/(1 - r²).
        for r in [0.0977_f64, 0.3] {
            let pot = radiation_potential(&cfg, 0, 1.0, x_for(r)).unwrap();
            assert_relative_eq!(pot.relative_error, r.powi(4) / (1.0 - r * r), max_relative = 1e-6);
        }
        let pot = radiation_potential(&cfg, 0, 1.0, x_for(0.3)).unwrap();
        assert_relative_eq!(pot.relative_error, 8.9e-3, max_relative = 1e-2);

        let e1 = radiation_potential(&cfg, 0, 1.0, x_for(0.01)).unwrap().relative_error;
        let e2 = radiation_potential(&cfg, 0, 1.0, x_for(0.02)).unwrap().relative_error;
        assert!((e2 / e1 / 16.0 - 1.0).abs() < 0.05);
    }

    #[test]
    fn power_and_finesse() {
        let mode = stiffening_mode();
        let p = input_power(&mode);
        let tp = 2.0 * std::f64::consts::PI;
        let oracle = 1.054571817e-34 * tp * 7e14 * (tp * 1e12f64).powi(2) / (2.0 * tp * 1e6);
        assert_relative_eq!(p, oracle, max_relative = 1e-14);
        assert_relative_eq!(p, 1.457, max_relative = 5e-3);
        let mut dark = mode;
        dark.drive_max_cyc = 0.0;
        assert_eq!(input_power(&dark), 0.0);

        let f = finesse(&geometry(), 1e6);
        assert_relative_eq!(f, 3.747e4, max_relative = 5e-3);
        let long = CavityGeometry { length: 4e-3 };
        assert_relative_eq!(finesse(&long, 1e6), f / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn zero_point_product() {
        let d = ground_state().derived().unwrap();
        assert_relative_eq!(d.x_zpf * d.p_zpf, HBAR / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn kappa_audit_is_exact() {
        assert_eq!(ground_state().kappa_over_delta(), vec![0.1, 0.1]);
    }

    #[test]
    fn validation_names_fields() {
        let mut cfg = ground_state();
        cfg.modes[1].detuning_cyc = 0.0;
        match cfg.validate() {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "modes[1].detuning"),
            other => panic!("unexpected {other:?}"),
        }
        let mut cfg = ground_state();
        cfg.modes.push(inverting_mode());
        assert!(cfg.validate().is_err());
        let mut cfg = fast_cooling();
        cfg.mechanical.mass = -1.0;
        assert!(cfg.validate().is_err());
    }
}
