use serde::Serialize;

use super::{design_protocol, Endpoints, ProtocolSpec};
use crate::dynamics::IntegratorSettings;
use crate::error::Result;
use crate::model::SystemConfig;
use crate::trajectory::{solve_ermakov, ControlSchedule, FrequencySchedule};

/// Durations shown in the figure, in units of 1/ω.
pub const FIG2_DURATIONS: [f64; 3] = [0.2, 0.6, 2.0];

/// Waveforms on the schedule's sample grid, in units of the bare frequency ω.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub t_omega: Vec<f64>,
    pub omega_eff_sq_ratio: Vec<f64>,
    pub f1_sq: Vec<f64>,
    pub f2_sq: Vec<f64>,
    pub b: Vec<f64>,
    pub bdot_over_omega: Vec<f64>,
}

impl Series {
    pub fn len(&self) -> usize {
        self.t_omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_omega.is_empty()
    }
}

/// Tabulates a designed stroke. b comes from the closed form when the schedule
/// has one and from integrating the Ermakov equation otherwise.
pub fn series(
    schedule: &FrequencySchedule,
    controls: &ControlSchedule,
    omega: f64,
    settings: &IntegratorSettings,
) -> Result<Series> {
    let t_omega: Vec<f64> = schedule.times().map(|t| t * omega).collect();
    let (b, bdot) = match schedule.scaling() {
        Some(poly) => schedule.times().map(|t| {
            let [b, bd, _] = poly.at(t);
            (b, bd)
        }).unzip(),
        None => {
            let sol = solve_ermakov(schedule, settings)?;
            (sol.b, sol.bdot)
        }
    };
    Ok(Series {
        t_omega,
        omega_eff_sq_ratio: schedule.values.iter().map(|v| v / (omega * omega)).collect(),
        f1_sq: controls.f1_sq.clone(),
        f2_sq: controls.f2_sq.clone(),
        b,
        bdot_over_omega: bdot.iter().map(|v: &f64| v / omega).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig2Dataset {
    pub omega0: f64,
    pub omega_f: f64,
    pub durations: Vec<f64>,
    pub series: Vec<Series>,
}

/// Ground-state schedules and drives for each of [`FIG2_DURATIONS`].
pub fn reproduce_fig2(config: &SystemConfig, spec: &ProtocolSpec, settings: &IntegratorSettings) -> Result<Fig2Dataset> {
    let omega = config.mechanical.omega();
    let mut ends = None;
    let series = FIG2_DURATIONS
        .iter()
        .map(|&tf| {
            let spec = ProtocolSpec {
                variant: "ground-state".into(),
                tf_omega: tf,
                ..spec.clone()
            };
            let (e, schedule, controls) = design_protocol(config, &spec)?;
            ends = Some(e);
            series(&schedule, &controls, omega, settings)
        })
        .collect::<Result<Vec<_>>>()?;
    let Endpoints { omega0, omega_f, .. } = ends.expect("three durations");
    Ok(Fig2Dataset {
        omega0,
        omega_f,
        durations: FIG2_DURATIONS.to_vec(),
        series,
    })
}
