//! Serialization of run artifacts. Floats are written in shortest round-trip form.

use std::fs;
use std::io::Write;
use std::path::Path;

use optocool::protocols::{CoolingReport, Series};
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::CliError;

pub const SERIES_HEADER: [&str; 6] = ["t_omega", "omega_eff_sq_ratio", "f1_sq", "f2_sq", "b", "bdot_over_omega"];

pub fn float(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory writer")
}

pub fn series_csv(series: &Series) -> Vec<u8> {
    let mut w = csv_writer();
    w.write_record(SERIES_HEADER).expect("in-memory writer");
    for i in 0..series.len() {
        let row = [
            series.t_omega[i],
            series.omega_eff_sq_ratio[i],
            series.f1_sq[i],
            series.f2_sq[i],
            series.b[i],
            series.bdot_over_omega[i],
        ];
        w.write_record(row.map(float)).expect("in-memory writer");
    }
    finish(w)
}

/// The fixed-key run summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub n_bar_o: f64,
    pub n_bar_i: f64,
    pub n_bar_f: f64,
    pub energy_ratio: f64,
    pub t_eff_final_k: f64,
    pub max_f1_sq: f64,
    pub max_f2_sq: f64,
    pub max_bo_ratio: Vec<f64>,
    pub min_omega_eff_sq_ratio: f64,
    pub g_x_over_delta: f64,
    pub kappa_over_delta: Vec<f64>,
    pub feasible: bool,
    pub steps: usize,
    pub symplectic_residual: f64,
}

impl From<&CoolingReport> for Summary {
    fn from(r: &CoolingReport) -> Self {
        let v = &r.validity;
        Self {
            n_bar_o: r.n_bar_o,
            n_bar_i: r.n_bar_i,
            n_bar_f: r.n_bar_f,
            energy_ratio: r.energy_ratio,
            t_eff_final_k: r.t_eff_final,
            max_f1_sq: v.max_f1_sq,
            max_f2_sq: v.max_f2_sq,
            max_bo_ratio: v.max_bo_ratio.clone(),
            min_omega_eff_sq_ratio: v.min_omega_eff_sq_ratio,
            g_x_over_delta: v.g_x_over_delta,
            kappa_over_delta: v.kappa_over_delta.clone(),
            feasible: v.feasible,
            steps: r.diagnostics.steps,
            symplectic_residual: r.diagnostics.symplectic_residual,
        }
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}

pub const SWEEP_HEADER: [&str; 13] = [
    "tf_omega",
    "feasible",
    "n_bar_i",
    "n_bar_f",
    "energy_ratio",
    "t_eff_final_k",
    "max_f1_sq",
    "max_f2_sq",
    "max_bo_ratio",
    "min_omega_eff_sq_ratio",
    "g_x_over_delta",
    "steps",
    "symplectic_residual",
];

/// One row per duration. Infeasible durations keep only their t_f.
pub fn sweep_csv(rows: &[(f64, Option<Summary>)]) -> Vec<u8> {
    let mut w = csv_writer();
    w.write_record(SWEEP_HEADER).expect("in-memory writer");
    for (tf, summary) in rows {
        let mut record = vec![float(*tf)];
        match summary {
            Some(s) => record.extend([
                s.feasible.to_string(),
                float(s.n_bar_i),
                float(s.n_bar_f),
                float(s.energy_ratio),
                float(s.t_eff_final_k),
                float(s.max_f1_sq),
                float(s.max_f2_sq),
                float(s.max_bo_ratio.iter().copied().fold(0.0, f64::max)),
                float(s.min_omega_eff_sq_ratio),
                float(s.g_x_over_delta),
                s.steps.to_string(),
                float(s.symplectic_residual),
            ]),
            None => {
                record.push("false".into());
                record.extend(std::iter::repeat(String::new()).take(SWEEP_HEADER.len() - 2));
            }
        }
        w.write_record(&record).expect("in-memory writer");
    }
    finish(w)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(io_err)?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
