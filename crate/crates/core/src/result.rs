use alloc::vec::Vec;

use crate::circuit::{Circuit, GateKind};
use crate::device::Device;

/// Where and when one input gate runs. `location` is a physical node for a
/// single-qubit gate and an edge index for a two-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GatePlacement {
    pub time: usize,
    pub location: usize,
}

/// A SWAP on `edge` occupying slots `finish_time - S + 1 ..= finish_time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwapPlacement {
    pub edge: usize,
    pub finish_time: usize,
}

/// A scheduled, placed and routed circuit.
///
/// `mapping_trajectory[t][q]` is the physical qubit holding logical qubit `q`
/// during slot `t`; it has `max(depth_slots, 1)` rows and its first row is the
/// initial mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisResult {
    /// Time-coordinate bound of the model that produced this result
    /// (coarse block bound for transition-based runs).
    pub solver_t: usize,
    pub depth_slots: usize,
    /// Number of gate blocks, for transition-based and QAOA runs.
    pub depth_blocks: Option<usize>,
    pub swap_count: usize,
    pub fidelity_scaled: i64,
    pub initial_mapping: Vec<usize>,
    pub gates: Vec<GatePlacement>,
    pub swaps: Vec<SwapPlacement>,
    pub mapping_trajectory: Vec<Vec<usize>>,
    /// The solver's optimal objective value, when one was optimized.
    pub objective_value: Option<i64>,
}

impl SynthesisResult {
    /// Fills in the derived metric fields from the placement data.
    pub fn assemble(
        circuit: &Circuit,
        device: &Device,
        solver_t: usize,
        gates: Vec<GatePlacement>,
        mut swaps: Vec<SwapPlacement>,
        mapping_trajectory: Vec<Vec<usize>>,
        objective_value: Option<i64>,
    ) -> Self {
        swaps.sort_unstable_by_key(|s| (s.finish_time, s.edge));
        let depth_slots = depth_of(&gates);
        let initial_mapping = mapping_trajectory.first().cloned().unwrap_or_default();
        let final_mapping = mapping_trajectory.last().cloned().unwrap_or_default();
        let fidelity_scaled = scaled_fidelity(circuit, device, &gates, &swaps, &final_mapping);
        SynthesisResult {
            solver_t,
            depth_slots,
            depth_blocks: None,
            swap_count: swaps.len(),
            fidelity_scaled,
            initial_mapping,
            gates,
            swaps,
            mapping_trajectory,
            objective_value,
        }
    }

    pub fn final_mapping(&self) -> &[usize] {
        self.mapping_trajectory.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Each SWAP is three two-qubit gates.
    pub fn additional_cx(&self) -> usize {
        3 * self.swap_count
    }
}

/// Occupied time slots: largest gate time plus one, zero without gates.
pub fn depth_of(gates: &[GatePlacement]) -> usize {
    gates.iter().map(|g| g.time + 1).max().unwrap_or(0)
}

/// Sum of integer-scaled log fidelities: measurement at the final mapping,
/// every input gate at its location, and three two-qubit gates per SWAP.
pub fn scaled_fidelity(
    circuit: &Circuit,
    device: &Device,
    gates: &[GatePlacement],
    swaps: &[SwapPlacement],
    final_mapping: &[usize],
) -> i64 {
    let measure: i64 = final_mapping.iter().map(|&p| device.scaled_measure(p)).sum();
    let input: i64 = circuit
        .gates()
        .iter()
        .zip(gates)
        .map(|(g, placed)| match g.kind() {
            GateKind::Single => device.scaled_single(placed.location),
            GateKind::Two => device.scaled_two(placed.location),
        })
        .sum();
    let swap: i64 = swaps.iter().map(|s| device.swap_log_fidelity(s.edge)).sum();
    measure + input + swap
}

/// Replays SWAPs over an initial mapping: row `t + 1` is row `t` with every
/// SWAP finishing at `t` applied.
pub fn replay_trajectory(
    device: &Device,
    initial: &[usize],
    swaps: &[SwapPlacement],
    rows: usize,
) -> Vec<Vec<usize>> {
    let mut trajectory = Vec::with_capacity(rows.max(1));
    let mut current = initial.to_vec();
    trajectory.push(current.clone());
    for t in 0..rows.max(1) - 1 {
        for s in swaps.iter().filter(|s| s.finish_time == t) {
            let e = device.edge(s.edge);
            for p in current.iter_mut() {
                if let Some(other) = e.other(*p) {
                    *p = other;
                }
            }
        }
        trajectory.push(current.clone());
    }
    trajectory
}
