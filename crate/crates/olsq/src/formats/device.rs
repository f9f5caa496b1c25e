use olsq_core::device::{Device, FidelityProfile};
use serde::{Deserialize, Serialize};

use super::FormatError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FidelityFile {
    measure: Vec<f64>,
    single: Vec<f64>,
    two: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fidelity: Option<FidelityFile>,
}

pub fn load_device(text: &str) -> Result<Device, FormatError> {
    let file: DeviceFile = serde_json::from_str(text)?;
    let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
    let fidelity = file.fidelity.map(|f| FidelityProfile {
        measure: f.measure,
        single: f.single,
        two: f.two,
    });
    Ok(Device::new(file.num_qubits, &edges, fidelity)?)
}

/// Canonical JSON form; the fidelity profile is always written out.
pub fn write_device(device: &Device) -> String {
    let f = device.fidelity();
    let file = DeviceFile {
        name: None,
        num_qubits: device.num_nodes(),
        edges: device.edges().iter().map(|e| [e.p, e.q]).collect(),
        fidelity: Some(FidelityFile {
            measure: f.measure.clone(),
            single: f.single.clone(),
            two: f.two.clone(),
        }),
    };
    serde_json::to_string_pretty(&file).expect("device serializes") + "\n"
}
