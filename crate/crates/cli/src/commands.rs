use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use optocool::protocols::{
    design_protocol, minimal_time, reproduce_fig2, run_protocol, series, MinimalTime, ProtocolRun, TimeConstraints,
    DEFAULT_BRACKET, FIG2_DURATIONS,
};
use optocool::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{config_error, RunConfig};
use crate::error::CliError;
use crate::output::{json, series_csv, sweep_csv, write_atomic, Summary};

/// Per-invocation overrides of the configuration's protocol block.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Stroke duration in units of 1/ω.
    pub tf: Option<f64>,
    pub ratio_r: Option<f64>,
    pub damped: bool,
    pub baseline: bool,
}

fn with_options(config: &RunConfig, variant: Option<&str>, opts: &RunOptions) -> Result<RunConfig, CliError> {
    let mut config = config.clone();
    if let Some(v) = variant {
        config.protocol.variant = v.to_string();
    }
    if let Some(tf) = opts.tf {
        config.protocol.tf_omega_units = tf;
    }
    if let Some(r) = opts.ratio_r {
        config.protocol.ratio_r = r;
    }
    config.validate()?;
    Ok(config)
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

fn emit(stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    stdout.write_all(bytes).map_err(stdout_err)
}

fn run(config: &RunConfig, opts: &RunOptions) -> Result<ProtocolRun, CliError> {
    let mut spec = config.protocol_spec();
    spec.include_damped_check = opts.damped;
    spec.include_baseline = opts.baseline;
    Ok(run_protocol(&config.system(), &spec, &config.settings())?)
}

fn run_series(config: &RunConfig, run: &ProtocolRun) -> Result<Vec<u8>, CliError> {
    let omega = config.system().mechanical.omega();
    Ok(series_csv(&series(&run.schedule, &run.controls, omega, &config.settings())?))
}

/// Schedule and drive waveforms as CSV, without propagation.
pub fn cmd_design(config: &RunConfig, tf: Option<f64>, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let opts = RunOptions {
        tf,
        ..RunOptions::default()
    };
    let config = with_options(config, None, &opts)?;
    let system = config.system();
    let (_, schedule, controls) = design_protocol(&system, &config.protocol_spec())?;
    let csv = series_csv(&series(&schedule, &controls, system.mechanical.omega(), &config.settings())?);
    match out {
        Some(path) => write_atomic(path, &csv),
        None => emit(stdout, &csv),
    }
}

/// Full run. The summary goes to stdout and, if requested, to `out`; `outdir`
/// receives series.csv, summary.json and the complete report.json.
pub fn cmd_simulate(
    config: &RunConfig,
    opts: &RunOptions,
    out: Option<&Path>,
    outdir: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    simulate(config, None, opts, out, outdir, stdout)
}

pub fn cmd_protocol(
    config: &RunConfig,
    variant: &str,
    opts: &RunOptions,
    out: Option<&Path>,
    outdir: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    simulate(config, Some(variant), opts, out, outdir, stdout)
}

fn simulate(
    config: &RunConfig,
    variant: Option<&str>,
    opts: &RunOptions,
    out: Option<&Path>,
    outdir: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let config = with_options(config, variant, opts)?;
    let run = run(&config, opts)?;
    let summary = json(&Summary::from(&run.report));
    if let Some(dir) = outdir {
        let csv = run_series(&config, &run)?;
        let report = json(&run.report);
        write_atomic(&dir.join("series.csv"), &csv)?;
        write_atomic(&dir.join("summary.json"), &summary)?;
        write_atomic(&dir.join("report.json"), &report)?;
    }
    if let Some(path) = out {
        write_atomic(path, &summary)?;
    }
    emit(stdout, &summary)
}

pub const FIG2_FILES: [&str; 3] = ["fig2_tf0.2.csv", "fig2_tf0.6.csv", "fig2_tf2.0.csv"];
pub const FIG2_SUMMARY: &str = "fig2_summary.json";

/// The three figure durations as CSV, plus one summary per duration.
pub fn cmd_fig2(config: &RunConfig, outdir: &Path) -> Result<(), CliError> {
    let system = config.system();
    let spec = config.protocol_spec();
    let settings = config.settings();
    let data = reproduce_fig2(&system, &spec, &settings)?;

    let mut summaries = BTreeMap::new();
    for &tf in &FIG2_DURATIONS {
        let mut spec = spec.clone();
        spec.variant = "ground-state".into();
        spec.tf_omega = tf;
        let report = run_protocol(&system, &spec, &settings)?.report;
        summaries.insert(format!("tf{tf:.1}"), Summary::from(&report));
    }
    // Everything is computed before the first file is touched.
    let csvs: Vec<Vec<u8>> = data.series.iter().map(series_csv).collect();
    for (name, bytes) in FIG2_FILES.iter().zip(&csvs) {
        write_atomic(&outdir.join(name), bytes)?;
    }
    write_atomic(&outdir.join(FIG2_SUMMARY), &json(&summaries))
}

/// Evenly spaced durations from `from` to `to` inclusive.
pub fn sweep_points(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    let bad = |field: &str, message: &str| CliError::Config {
        field: field.into(),
        message: message.into(),
    };
    if points == 0 {
        return Err(bad("--points", "must be at least 1"));
    }
    if !(from.is_finite() && from > 0.0) {
        return Err(bad("--from", "must be positive"));
    }
    if !(to.is_finite() && to >= from) {
        return Err(bad("--to", "must not be below --from"));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| if i == points - 1 { to } else { from + step * i as f64 })
        .collect())
}

/// One summary row per duration. Infeasible durations are reported, not fatal.
pub fn cmd_sweep(
    config: &RunConfig,
    durations: &[f64],
    parallel: bool,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    config.validate()?;
    let one = |tf: f64| -> Result<(f64, Option<Summary>), CliError> {
        let mut config = config.clone();
        config.protocol.tf_omega_units = tf;
        match run(&config, &RunOptions::default()) {
            Ok(run) => Ok((tf, Some(Summary::from(&run.report)))),
            Err(CliError::Infeasible(_)) => Ok((tf, None)),
            Err(e) => Err(e),
        }
    };
    let rows: Vec<_> = if parallel {
        durations.par_iter().map(|&tf| one(tf)).collect::<Result<_, _>>()?
    } else {
        durations.iter().map(|&tf| one(tf)).collect::<Result<_, _>>()?
    };
    let csv = sweep_csv(&rows);
    match out {
        Some(path) => write_atomic(path, &csv),
        None => emit(stdout, &csv),
    }
}

#[derive(Debug, Serialize)]
struct MinTimeOutput<'a> {
    variant: &'a str,
    #[serde(flatten)]
    result: MinimalTime,
}

pub fn cmd_mintime(
    config: &RunConfig,
    max_bo_ratio: Option<f64>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    config.validate()?;
    if let Some(limit) = max_bo_ratio {
        if !(limit > 0.0) {
            return Err(CliError::Config {
                field: "--max-bo".into(),
                message: "must be positive".into(),
            });
        }
    }
    let limits = TimeConstraints {
        max_bo_ratio,
        ..TimeConstraints::default()
    };
    let spec = config.protocol_spec();
    let result = minimal_time(&config.system(), &spec, &limits, DEFAULT_BRACKET).map_err(|e| match e {
        Error::InvalidParameter { .. } | Error::UnknownStrategy { .. } => config_error(e),
        other => other.into(),
    })?;
    let bytes = json(&MinTimeOutput {
        variant: &spec.variant,
        result,
    });
    if let Some(path) = out {
        write_atomic(path, &bytes)?;
    }
    emit(stdout, &bytes)
}
