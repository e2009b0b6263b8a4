//! JSON run configuration. All frequencies are cyclic (Hz).

use std::fs;
use std::path::Path;

use optocool::dynamics::IntegratorSettings;
use optocool::model::{CavityGeometry, MechanicalOscillator, OpticalMode, SystemConfig};
use optocool::protocols::ProtocolSpec;
use optocool::trajectory::{DEFAULT_DESIGNER, DEFAULT_SAMPLES};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanicalBlock {
    pub mass_kg: f64,
    pub freq_hz: f64,
    #[serde(default = "default_quality_factor")]
    pub quality_factor: f64,
    pub bath_temperature_k: f64,
}

fn default_quality_factor() -> f64 {
    MechanicalOscillator::DEFAULT_QUALITY_FACTOR
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityBlock {
    pub length_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeBlock {
    pub freq_hz: f64,
    pub detuning_hz: f64,
    pub drive_max_hz: f64,
    pub kappa_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolBlock {
    pub variant: String,
    pub tf_omega_units: f64,
    pub ratio_r: f64,
    pub samples: usize,
    pub designer: String,
    pub omega0_ratio: Option<f64>,
}

impl Default for ProtocolBlock {
    fn default() -> Self {
        Self {
            variant: "ground_state".into(),
            tf_omega_units: 0.6,
            ratio_r: 10.0,
            samples: DEFAULT_SAMPLES,
            designer: DEFAULT_DESIGNER.into(),
            omega0_ratio: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorBlock {
    pub steps_per_period: usize,
    pub min_steps: usize,
    pub method: String,
    pub refinement_check: bool,
}

impl Default for IntegratorBlock {
    fn default() -> Self {
        let s = IntegratorSettings::default();
        Self {
            steps_per_period: s.steps_per_period,
            min_steps: s.min_steps,
            method: s.method,
            refinement_check: s.refinement_check,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mechanical: MechanicalBlock,
    pub cavity: CavityBlock,
    pub modes: Vec<ModeBlock>,
    #[serde(default)]
    pub protocol: ProtocolBlock,
    #[serde(default)]
    pub integrator: IntegratorBlock,
}

/// Renames a core parameter path to the key used in the JSON document.
fn schema_path(field: &str) -> String {
    const KEYS: [(&str, &str); 8] = [
        ("mechanical.mass", "mechanical.mass_kg"),
        ("mechanical.freq", "mechanical.freq_hz"),
        ("mechanical.bath_temperature", "mechanical.bath_temperature_k"),
        ("cavity.length", "cavity.length_m"),
        (".freq", ".freq_hz"),
        (".detuning", ".detuning_hz"),
        (".drive_max", ".drive_max_hz"),
        (".decay", ".kappa_hz"),
    ];
    KEYS.iter()
        .find(|(core, _)| field.ends_with(core))
        .map(|(core, json)| format!("{}{}", &field[..field.len() - core.len()], json))
        .unwrap_or_else(|| field.to_string())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config {
                field: if path == "." { String::new() } else { path },
                message: e.into_inner().to_string(),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn system(&self) -> SystemConfig {
        let m = &self.mechanical;
        SystemConfig {
            mechanical: MechanicalOscillator {
                mass: m.mass_kg,
                freq_cyc: m.freq_hz,
                quality_factor: m.quality_factor,
                bath_temperature: m.bath_temperature_k,
            },
            geometry: CavityGeometry {
                length: self.cavity.length_m,
            },
            modes: self
                .modes
                .iter()
                .map(|mode| OpticalMode {
                    freq_cyc: mode.freq_hz,
                    detuning_cyc: mode.detuning_hz,
                    drive_max_cyc: mode.drive_max_hz,
                    decay_cyc: mode.kappa_hz,
                })
                .collect(),
        }
    }

    pub fn protocol_spec(&self) -> ProtocolSpec {
        let p = &self.protocol;
        ProtocolSpec {
            variant: p.variant.clone(),
            tf_omega: p.tf_omega_units,
            ratio_r: p.ratio_r,
            include_damped_check: false,
            include_baseline: false,
            samples: p.samples,
            designer: p.designer.clone(),
            omega0_ratio: p.omega0_ratio,
        }
    }

    pub fn settings(&self) -> IntegratorSettings {
        let i = &self.integrator;
        IntegratorSettings {
            steps_per_period: i.steps_per_period,
            min_steps: i.min_steps,
            refinement_check: i.refinement_check,
            method: i.method.clone(),
        }
    }

    /// Semantic checks, reported against JSON key paths.
    pub fn validate(&self) -> Result<(), CliError> {
        self.system().validate().map_err(config_error)?;
        self.protocol_spec().validate().map_err(config_error)?;
        self.settings().validate().map_err(config_error)?;
        Ok(())
    }
}

/// Turns a core validation failure into a configuration error.
pub fn config_error(e: optocool::Error) -> CliError {
    use optocool::Error;
    match e {
        Error::InvalidParameter { field, reason } => CliError::Config {
            field: schema_path(&field),
            message: reason,
        },
        Error::UnknownStrategy { kind, name, available } => CliError::Config {
            field: match kind {
                "protocol" => "protocol.variant",
                "schedule designer" => "protocol.designer",
                "stepper" => "integrator.method",
                _ => kind,
            }
            .to_string(),
            message: format!("unknown {kind} `{name}` (available: {available})"),
        },
        other => CliError::from(other),
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config {
        field: String::new(),
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    RunConfig::from_json(&text)
}
