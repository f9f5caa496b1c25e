//! File formats: gate lists, QASM subset, device and result JSON, graph edge
//! lists and benchmark manifests.

pub mod device;
pub mod gatelist;
pub mod graph;
pub mod manifest;
pub mod qasm;
pub mod result;

use olsq_core::error::{CircuitError, DeviceError};
use thiserror::Error;

pub use device::{load_device, write_device};
pub use gatelist::{parse_program, write_program};
pub use graph::parse_graph;
pub use qasm::convert_qasm_subset;
pub use result::{parse_result, write_result};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unsupported feature: {feature}")]
    Unsupported { line: usize, feature: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid manifest: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
}
