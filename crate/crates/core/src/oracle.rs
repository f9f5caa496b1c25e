//! Exhaustive search over slot-by-slot executions of tiny instances.
//!
//! The search knows nothing about the constraint model: it simulates a
//! machine that, at every slot, runs a set of node-disjoint ready gates and
//! starts node-disjoint SWAPs on idle qubits. Its optima are the ground truth
//! the synthesizers are compared against.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Operands};
use crate::device::Device;
use crate::error::OracleError;

pub const MAX_QUBITS: usize = 4;
pub const MAX_GATES: usize = 6;
pub const MAX_NODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    /// Schedules must finish all gates within this many slots.
    pub max_slots: usize,
    pub swap_duration: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostKind {
    /// Fewest SWAPs within the slot bound.
    Swap,
    /// Fewest occupied slots.
    Depth,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    pos: Vec<u8>,
    done: u8,
    /// (edge, slots still to run), sorted.
    active: Vec<(u8, u8)>,
}

struct Search<'a> {
    circuit: &'a Circuit,
    device: &'a Device,
    preds: Vec<u8>,
    s: usize,
    full: u8,
}

impl Search<'_> {
    fn gate_nodes(&self, l: usize, pos: &[u8]) -> Option<(u8, Option<u8>)> {
        match self.circuit.gates()[l].operands {
            Operands::Single(q) => Some((pos[q], None)),
            Operands::Two(a, b) => {
                self.device.edge_between(pos[a] as usize, pos[b] as usize)?;
                Some((pos[a], Some(pos[b])))
            }
        }
    }

    /// Every successor of `state` after one slot, with the SWAPs it started.
    fn successors(&self, state: &State, out: &mut Vec<(State, usize)>) {
        let mut busy = 0u32;
        for &(k, _) in &state.active {
            let e = self.device.edge(k as usize);
            busy |= 1 << e.p | 1 << e.q;
        }
        let mut ready = Vec::new();
        for l in 0..self.circuit.len() {
            if state.done & (1 << l) != 0 || self.preds[l] & !state.done != 0 {
                continue;
            }
            if let Some((a, b)) = self.gate_nodes(l, &state.pos) {
                let nodes = 1u32 << a | b.map_or(0, |b| 1u32 << b);
                if nodes & busy == 0 {
                    ready.push((l, nodes));
                }
            }
        }
        let mut gate_sets = Vec::new();
        subsets(&ready, 0, 0, 0, &mut gate_sets);
        let free_edges: Vec<(usize, u32)> = self
            .device
            .edges()
            .iter()
            .enumerate()
            .map(|(k, e)| (k, 1u32 << e.p | 1u32 << e.q))
            .filter(|&(_, m)| m & busy == 0)
            .collect();
        for &(gates, used) in &gate_sets {
            let mut swap_sets = Vec::new();
            subsets(&free_edges, 0, used, 0, &mut swap_sets);
            for &(edges, _) in &swap_sets {
                let mut active: Vec<(u8, u8)> = state.active.iter().map(|&(k, r)| (k, r - 1)).collect();
                let mut started = 0;
                for (i, &(k, _)) in free_edges.iter().enumerate() {
                    if edges & (1 << i) != 0 {
                        active.push((k as u8, (self.s - 1) as u8));
                        started += 1;
                    }
                }
                let mut pos = state.pos.clone();
                active.retain(|&(k, r)| {
                    if r == 0 {
                        let e = self.device.edge(k as usize);
                        for p in pos.iter_mut() {
                            if let Some(o) = e.other(*p as usize) {
                                *p = o as u8;
                            }
                        }
                    }
                    r > 0
                });
                active.sort_unstable();
                let mut done = state.done;
                for (i, &(l, _)) in ready.iter().enumerate() {
                    if gates & (1 << i) != 0 {
                        done |= 1 << l;
                    }
                }
                out.push((State { pos, done, active }, started));
            }
        }
    }
}

/// Node-disjoint subsets of `items` avoiding `blocked`, as index bitmasks.
fn subsets<T>(items: &[(T, u32)], from: usize, blocked: u32, chosen: u32, out: &mut Vec<(u32, u32)>) {
    out.push((chosen, blocked));
    for i in from..items.len() {
        let m = items[i].1;
        if m & blocked == 0 {
            subsets(items, i + 1, blocked | m, chosen | 1 << i, out);
        }
    }
}

fn placements(m: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(m: usize, n: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for p in 0..n as u8 {
            if !cur.contains(&p) {
                cur.push(p);
                rec(m, n, cur, out);
                cur.pop();
            }
        }
    }
    rec(m, n, &mut cur, &mut out);
    out
}

/// Optimal cost over every execution that respects the dependencies
/// strictly and finishes within `bounds.max_slots` slots.
pub fn optimal_cost(
    circuit: &Circuit,
    device: &Device,
    kind: CostKind,
    bounds: OracleBounds,
) -> Result<usize, OracleError> {
    let (m, l, n) = (circuit.num_qubits(), circuit.len(), device.num_nodes());
    if m > MAX_QUBITS || l > MAX_GATES || n > MAX_NODES || m > n || bounds.swap_duration == 0 {
        return Err(OracleError::BoundsExceeded { m, l, n });
    }
    if l == 0 {
        return Ok(0);
    }
    let mut preds = vec![0u8; l];
    for &(a, b) in circuit.dependencies() {
        preds[b] |= 1 << a;
    }
    let search = Search {
        circuit,
        device,
        preds,
        s: bounds.swap_duration,
        full: ((1u16 << l) - 1) as u8,
    };

    let mut layer: BTreeMap<State, usize> = placements(m, n)
        .into_iter()
        .map(|pos| (State { pos, done: 0, active: Vec::new() }, 0))
        .collect();
    let mut seen: BTreeMap<State, usize> = layer.clone();
    let mut best: Option<usize> = None;
    let mut buf = Vec::new();
    for slot in 0..bounds.max_slots {
        let mut next: BTreeMap<State, usize> = BTreeMap::new();
        for (state, &cost) in &layer {
            buf.clear();
            search.successors(state, &mut buf);
            for (succ, started) in buf.drain(..) {
                let c = cost + started;
                if succ.done == search.full {
                    match kind {
                        CostKind::Depth => return Ok(slot + 1),
                        CostKind::Swap => {
                            best = Some(best.map_or(c, |b| b.min(c)));
                            continue;
                        }
                    }
                }
                if best.is_some_and(|b| c >= b) {
                    continue;
                }
                if seen.get(&succ).is_some_and(|&old| old <= c) {
                    continue;
                }
                seen.insert(succ.clone(), c);
                next.insert(succ, c);
            }
        }
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    best.ok_or(OracleError::NoSolution {
        max_slots: bounds.max_slots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn bounds(max_slots: usize, swap_duration: usize) -> OracleBounds {
        OracleBounds { max_slots, swap_duration }
    }

    #[test]
    fn in_place_circuit_needs_no_swaps() {
        let c = Circuit::new(2, vec![Gate::two("cx", 0, 1), Gate::single("h", 0)]).unwrap().prepare();
        let d = Device::path(2);
        assert_eq!(optimal_cost(&c, &d, CostKind::Swap, bounds(4, 3)), Ok(0));
        assert_eq!(optimal_cost(&c, &d, CostKind::Depth, bounds(4, 3)), Ok(2));
    }

    #[test]
    fn triangle_on_path_needs_one_swap() {
        let c = Circuit::new(3, vec![Gate::two("cx", 0, 1), Gate::two("cx", 1, 2), Gate::two("cx", 0, 2)])
            .unwrap()
            .prepare();
        let d = Device::path(3);
        assert_eq!(optimal_cost(&c, &d, CostKind::Swap, bounds(10, 3)), Ok(1));
        // two gates, a three-slot SWAP, the last gate
        assert_eq!(optimal_cost(&c, &d, CostKind::Depth, bounds(10, 3)), Ok(6));
        assert_eq!(optimal_cost(&c, &d, CostKind::Depth, bounds(10, 1)), Ok(4));
        assert_eq!(
            optimal_cost(&c, &d, CostKind::Swap, bounds(3, 3)),
            Err(OracleError::NoSolution { max_slots: 3 })
        );
    }

    #[test]
    fn refuses_large_instances() {
        let c = Circuit::new(5, vec![]).unwrap().prepare();
        assert!(matches!(
            optimal_cost(&c, &Device::path(5), CostKind::Depth, bounds(3, 1)),
            Err(OracleError::BoundsExceeded { .. })
        ));
    }
}
