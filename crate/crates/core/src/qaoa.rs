//! Two-pass synthesis for phase-separation circuits, whose two-qubit gates
//! all commute.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::device::Device;
use crate::encode::{decode, encode, solve_once, DependencyRule, EncodingConfig, ObjectiveKind, SynthesisOptions};
use crate::error::{CircuitError, SynthesisError};
use crate::model::{Cmp, Formula, LinearExpr, Sense, Solver, Term};
use crate::result::SynthesisResult;
use crate::transition::{asap_schedule, decode_plan, encode_tb, solve_plan, TransitionPlan};

/// One `zz` gate per graph edge, in edge order, with no dependencies.
pub fn phase_separation_from_graph(num_nodes: usize, edges: &[(usize, usize)]) -> Result<Circuit, CircuitError> {
    let mut gates = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        if a == b {
            return Err(CircuitError::GraphSelfLoop(a, b));
        }
        gates.push(Gate::two("zz", a, b));
    }
    Ok(Circuit::new(num_nodes, gates)?.derive_collisions().without_dependencies())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QaoaOutcome {
    pub plan: TransitionPlan,
    /// Pass-1 plan scheduled ASAP.
    pub scheduled: SynthesisResult,
    /// Pass-2 re-timed result.
    pub result: SynthesisResult,
}

/// Pass 1 finds blocks and SWAPs with the coarse model and no dependencies;
/// with the SWAP objective it then spreads gates evenly over the blocks.
/// Pass 2 keeps the gate locations, the initial mapping and the multiset of
/// SWAP edges, and re-times everything on the exact axis to minimize depth.
/// The bound of pass 2 is the ASAP depth of pass 1, so it is always feasible.
pub fn synthesize_qaoa<S: Solver>(
    circuit: &Circuit,
    device: &Device,
    objective: ObjectiveKind,
    options: &SynthesisOptions,
    mut solver: S,
) -> Result<QaoaOutcome, SynthesisError> {
    if let Some(gate) = circuit.gates().iter().position(|g| g.kind() != GateKind::Two) {
        return Err(CircuitError::NotTwoQubit { gate }.into());
    }
    let circuit = circuit.clone().derive_collisions().without_dependencies();
    let mut plan = solve_plan(&circuit, device, objective, DependencyRule::Dropped, options, &mut solver)?;
    if objective == ObjectiveKind::Swap && !circuit.is_empty() {
        plan = balance_blocks(&circuit, device, &plan, options, &mut solver)?;
    }
    let scheduled = asap_schedule(&plan, &circuit, device, options.swap_duration)?;
    if circuit.is_empty() {
        return Ok(QaoaOutcome {
            plan,
            result: scheduled.clone(),
            scheduled,
        });
    }

    let bound = scheduled.depth_slots.max(1);
    let mut config = EncodingConfig::exact(bound, options.swap_duration, ObjectiveKind::Depth);
    config.dependencies = DependencyRule::Dropped;
    config.break_symmetry = false;
    let mut encoding = encode(&circuit, device, &config)?;
    let vars = &encoding.vars;
    let model = &mut encoding.model;
    for (l, &x) in vars.space.iter().enumerate() {
        model.assert(x.eq(plan.locations[l] as i64))?;
    }
    for (q, row) in vars.pi.iter().enumerate() {
        model.assert(row[0].eq(scheduled.initial_mapping[q] as i64))?;
    }
    let mut counts = vec![0i64; device.num_edges()];
    for s in &scheduled.swaps {
        counts[s.edge] += 1;
    }
    for (k, row) in vars.sigma.iter().enumerate() {
        if counts[k] == 0 {
            for &sw in row {
                model.assert(sw.is_false())?;
            }
        } else {
            let sum = LinearExpr::sum_of_bools(row.iter().copied());
            model.assert(Formula::linear(sum, Cmp::Eq, counts[k]))?;
        }
    }
    let (assignment, value) = solve_once(&mut solver, &encoding.model, options.timeout, bound)?
        .ok_or_else(|| SynthesisError::Internal(format!("re-timing pass infeasible at T={bound}")))?;
    let mut result = decode(&circuit, device, &encoding, &assignment, value);
    result.depth_blocks = Some(plan.num_blocks());
    Ok(QaoaOutcome {
        plan,
        scheduled,
        result,
    })
}

/// Among plans with the same block bound and no more SWAPs, finds one
/// minimizing the sum over blocks of the largest number of gates any qubit
/// has in that block.
fn balance_blocks<S: Solver>(
    circuit: &Circuit,
    device: &Device,
    plan: &TransitionPlan,
    options: &SynthesisOptions,
    solver: &mut S,
) -> Result<TransitionPlan, SynthesisError> {
    let blocks = plan.time_bound;
    let mut encoding = encode_tb(circuit, device, blocks, ObjectiveKind::Swap, DependencyRule::Dropped)?;
    let swaps = LinearExpr::sum_of_bools(encoding.vars.sigma.iter().flatten().copied());
    encoding.model.assert(Formula::linear(swaps, Cmp::Le, plan.swap_count() as i64))?;
    let degree = (0..circuit.num_qubits())
        .map(|q| circuit.gates().iter().filter(|g| g.operands.contains(q)).count())
        .max()
        .unwrap_or(0);
    let mut total = LinearExpr::new();
    for b in 0..blocks {
        let load = encoding.model.new_int(format!("load_{b}"), 0, degree as i64)?;
        total.add(1, Term::Int(load));
        for q in 0..circuit.num_qubits() {
            let mut on_q = LinearExpr::new().with(-1, Term::Int(load));
            for (l, gate) in circuit.gates().iter().enumerate() {
                if gate.operands.contains(q) {
                    on_q.add(1, Term::IntEq(encoding.vars.time[l], b as i64));
                }
            }
            encoding.model.assert(Formula::linear(on_q, Cmp::Le, 0))?;
        }
    }
    encoding.model.set_objective(Sense::Minimize, total)?;
    let (assignment, _) = solve_once(solver, &encoding.model, options.timeout, blocks)?
        .ok_or_else(|| SynthesisError::Internal(format!("balancing pass infeasible at T={blocks}")))?;
    let mut balanced = decode_plan(&encoding, &assignment, None);
    balanced.objective_value = Some(balanced.swap_count() as i64);
    Ok(balanced)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_to_circuit() {
        let c = phase_separation_from_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.dependencies().is_empty());
        assert_eq!(c.longest_chain(), 1);
        assert_eq!(phase_separation_from_graph(2, &[(1, 1)]), Err(CircuitError::GraphSelfLoop(1, 1)));
    }
}
