//! Benchmark manifests: CSV with a header row or a JSON array of rows, with
//! paths relative to the manifest file.

use serde::{Deserialize, Serialize};

use super::FormatError;
use crate::run::{Mode, Objective};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestRow {
    pub circuit: String,
    pub device: String,
    pub mode: Mode,
    pub objective: Objective,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap_duration: Option<usize>,
}

pub fn parse_manifest_csv(text: &str) -> Result<Vec<ManifestRow>, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows = reader.deserialize().collect::<Result<Vec<ManifestRow>, _>>()?;
    Ok(rows)
}

pub fn parse_manifest_json(text: &str) -> Result<Vec<ManifestRow>, FormatError> {
    Ok(serde_json::from_str(text)?)
}
