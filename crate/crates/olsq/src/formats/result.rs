use olsq_core::result::{GatePlacement, SwapPlacement, SynthesisResult};
use serde::{Deserialize, Serialize};

use super::FormatError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateEntry {
    id: usize,
    time: usize,
    location: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SwapEntry {
    edge: usize,
    finish_time: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResultFile {
    #[serde(rename = "solver_T")]
    solver_t: usize,
    depth_slots: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth_blocks: Option<usize>,
    swap_count: usize,
    fidelity_scaled: i64,
    initial_mapping: Vec<usize>,
    gates: Vec<GateEntry>,
    swaps: Vec<SwapEntry>,
    mapping_trajectory: Vec<Vec<usize>>,
}

pub fn write_result(result: &SynthesisResult) -> String {
    let file = ResultFile {
        solver_t: result.solver_t,
        depth_slots: result.depth_slots,
        depth_blocks: result.depth_blocks,
        swap_count: result.swap_count,
        fidelity_scaled: result.fidelity_scaled,
        initial_mapping: result.initial_mapping.clone(),
        gates: result
            .gates
            .iter()
            .enumerate()
            .map(|(id, g)| GateEntry {
                id,
                time: g.time,
                location: g.location,
            })
            .collect(),
        swaps: result
            .swaps
            .iter()
            .map(|s| SwapEntry {
                edge: s.edge,
                finish_time: s.finish_time,
            })
            .collect(),
        mapping_trajectory: result.mapping_trajectory.clone(),
    };
    serde_json::to_string_pretty(&file).expect("result serializes") + "\n"
}

/// Parses a result file. Gate entries may appear in any order but must
/// cover ids `0..L` exactly once.
pub fn parse_result(text: &str) -> Result<SynthesisResult, FormatError> {
    let file: ResultFile = serde_json::from_str(text)?;
    let mut gates = vec![None; file.gates.len()];
    for g in &file.gates {
        match gates.get_mut(g.id) {
            Some(slot @ None) => {
                *slot = Some(GatePlacement {
                    time: g.time,
                    location: g.location,
                })
            }
            Some(Some(_)) => return Err(FormatError::Invalid(format!("gate id {} listed twice", g.id))),
            None => return Err(FormatError::Invalid(format!("gate id {} out of range", g.id))),
        }
    }
    Ok(SynthesisResult {
        solver_t: file.solver_t,
        depth_slots: file.depth_slots,
        depth_blocks: file.depth_blocks,
        swap_count: file.swap_count,
        fidelity_scaled: file.fidelity_scaled,
        initial_mapping: file.initial_mapping,
        gates: gates.into_iter().map(|g| g.expect("all ids filled")).collect(),
        swaps: file
            .swaps
            .iter()
            .map(|s| SwapPlacement {
                edge: s.edge,
                finish_time: s.finish_time,
            })
            .collect(),
        mapping_trajectory: file.mapping_trajectory,
        objective_value: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SynthesisResult {
        SynthesisResult {
            solver_t: 4,
            depth_slots: 2,
            depth_blocks: Some(1),
            swap_count: 1,
            fidelity_scaled: -42,
            initial_mapping: vec![1, 0],
            gates: vec![GatePlacement { time: 0, location: 0 }, GatePlacement { time: 1, location: 1 }],
            swaps: vec![SwapPlacement { edge: 0, finish_time: 0 }],
            mapping_trajectory: vec![vec![1, 0], vec![0, 1]],
            objective_value: None,
        }
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = write_result(&sample());
        assert!(text.contains("\"solver_T\": 4"));
        let back = parse_result(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(write_result(&back), text);
    }

    #[test]
    fn rejects_duplicate_ids() {
        let text = write_result(&sample()).replace("\"id\": 1", "\"id\": 0");
        assert!(parse_result(&text).is_err());
    }
}
