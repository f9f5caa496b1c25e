//! File formats, a CaDiCaL-backed solver, the benchmark runner and the
//! command line for the layout synthesizers in `olsq-core`.

pub mod bench;
pub mod cli;
pub mod formats;
pub mod run;
pub mod sat;

use std::path::{Path, PathBuf};

use olsq_core::{Circuit, Device};
use thiserror::Error;

use formats::FormatError;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format {
        path: PathBuf,
        source: FormatError,
    },
}

impl LoadError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        LoadError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn format(path: &Path, source: FormatError) -> Self {
        LoadError::Format {
            path: path.to_path_buf(),
            source,
        }
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::io(path, e))
}

/// Loads a gate list, or a QASM file by extension, with collisions and the
/// default dependencies derived.
pub fn load_circuit(path: &Path) -> Result<Circuit, LoadError> {
    let text = read(path)?;
    let text = if path.extension().is_some_and(|e| e == "qasm") {
        formats::convert_qasm_subset(&text).map_err(|e| LoadError::format(path, e))?
    } else {
        text
    };
    let circuit = formats::parse_program(&text).map_err(|e| LoadError::format(path, e))?;
    Ok(circuit.prepare())
}

pub fn load_device_file(path: &Path) -> Result<Device, LoadError> {
    formats::load_device(&read(path)?).map_err(|e| LoadError::format(path, e))
}

/// A phase-separation circuit from a graph edge list.
pub fn load_graph_circuit(path: &Path) -> Result<Circuit, LoadError> {
    let (n, edges) = formats::parse_graph(&read(path)?).map_err(|e| LoadError::format(path, e))?;
    olsq_core::qaoa::phase_separation_from_graph(n, &edges).map_err(|e| LoadError::format(path, e.into()))
}

/// Directory of the bundled circuits, devices and manifests.
pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}
