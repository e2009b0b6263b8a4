use rayon::prelude::*;
use serde::Serialize;

use super::{design_protocol, ProtocolSpec};
use crate::dynamics::{occupation, propagate, thermal_state, IntegratorSettings};
use crate::error::Result;
use crate::model::SystemConfig;
use crate::trajectory::direct_ramp;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineRow {
    pub tf_omega: f64,
    pub n_bar_i: f64,
    pub sta_n_bar_f: f64,
    pub direct_n_bar_f: f64,
}

fn row(config: &SystemConfig, tf_omega: f64, samples: usize, settings: &IntegratorSettings) -> Result<BaselineRow> {
    let mut spec = ProtocolSpec::ground_state(tf_omega);
    spec.samples = samples;
    let (ends, sta, _) = design_protocol(config, &spec)?;
    let mass = config.mechanical.mass;
    let initial = thermal_state(ends.omega0, config.mechanical.bath_temperature, mass);
    let ramp = direct_ramp(ends.omega0, ends.omega_f, sta.t_f, samples)?;
    Ok(BaselineRow {
        tf_omega,
        n_bar_i: occupation(&initial, ends.omega0, mass),
        sta_n_bar_f: occupation(&propagate(&initial, &sta, mass, settings)?.state, ends.omega_f, mass),
        direct_n_bar_f: occupation(&propagate(&initial, &ramp, mass, settings)?.state, ends.omega_f, mass),
    })
}

/// Ground-state stroke at each duration (units of 1/ω), shortcut against a
/// direct smoothstep ramp of ω. Rows come back in input order.
pub fn compare_baselines(
    config: &SystemConfig,
    tf_omega: &[f64],
    samples: usize,
    settings: &IntegratorSettings,
) -> Result<Vec<BaselineRow>> {
    tf_omega
        .par_iter()
        .map(|&tf| row(config, tf, samples, settings))
        .collect()
}
