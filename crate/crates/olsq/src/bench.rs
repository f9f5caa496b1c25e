//! Runs manifest rows and tabulates SWAP cost, depth, fidelity and runtime.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use olsq_core::encode::SynthesisOptions;
use olsq_core::verify;
use olsq_core::SynthesisError;
use serde::Serialize;

use crate::formats::manifest::{parse_manifest_csv, parse_manifest_json, ManifestRow};
use crate::run::{self, Mode};
use crate::{load_circuit, load_device_file, LoadError};

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub circuit: String,
    pub device: String,
    pub mode: &'static str,
    pub objective: &'static str,
    pub swaps: Option<usize>,
    /// Additional two-qubit gates: three per SWAP.
    pub c: Option<usize>,
    pub d: Option<usize>,
    pub f: Option<String>,
    pub t: String,
    pub status: String,
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestRow>, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let rows = if path.extension().is_some_and(|e| e == "json") {
        parse_manifest_json(&text)
    } else {
        parse_manifest_csv(&text)
    };
    rows.map_err(|e| LoadError::format(path, e))
}

fn stem(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map_or_else(|| path.to_string(), |s| s.to_string_lossy().into_owned())
}

pub fn run_row(base: &Path, row: &ManifestRow, timeout: Option<Duration>) -> Result<BenchRow, LoadError> {
    let resolve = |p: &str| -> PathBuf { base.join(p) };
    let circuit = load_circuit(&resolve(&row.circuit))?;
    let device = load_device_file(&resolve(&row.device))?;
    let options = SynthesisOptions {
        swap_duration: row.swap_duration.unwrap_or(3),
        timeout,
        ..SynthesisOptions::default()
    };
    let circuit = if row.mode == Mode::Qaoa {
        circuit.without_dependencies()
    } else {
        circuit
    };
    let start = Instant::now();
    let outcome = run::synthesize(&circuit, &device, row.mode, row.objective, &options);
    let elapsed = start.elapsed().as_secs_f64();
    let mut out = BenchRow {
        circuit: stem(&row.circuit),
        device: stem(&row.device),
        mode: row.mode.name(),
        objective: row.objective.name(),
        swaps: None,
        c: None,
        d: None,
        f: None,
        t: format!("{elapsed:.3}"),
        status: String::new(),
    };
    match outcome {
        Ok(result) => {
            let m = verify::metrics(&circuit, &device, &result, options.swap_duration);
            out.swaps = Some(result.swap_count);
            out.c = Some(result.additional_cx());
            out.d = Some(result.depth_slots);
            match m {
                Ok(m) => {
                    out.f = Some(format!("{:.4}", m.fidelity));
                    out.status = "ok".into();
                }
                Err(e) => out.status = format!("invalid: {e}"),
            }
        }
        Err(SynthesisError::Timeout { .. }) => out.status = "timeout".into(),
        Err(SynthesisError::TimeBoundExhausted { .. }) => out.status = "unsatisfiable".into(),
        Err(e) => out.status = format!("error: {e}"),
    }
    Ok(out)
}

/// Runs every row and renders the CSV table.
pub fn run_manifest(path: &Path, timeout: Option<Duration>) -> Result<(Vec<BenchRow>, String), LoadError> {
    let rows = load_manifest(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut results = Vec::with_capacity(rows.len());
    for row in &rows {
        results.push(run_row(base, row, timeout)?);
    }
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    writer
        .write_record(["circuit", "device", "mode", "objective", "swaps", "c", "d", "f", "t", "status"])
        .expect("in-memory write");
    for r in &results {
        writer.serialize(r).expect("in-memory write");
    }
    let table = String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("CSV is UTF-8");
    Ok((results, table))
}
