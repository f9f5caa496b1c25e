//! Transition-based synthesis: a coarse model over gate blocks, then ASAP
//! scheduling of the blocks into concrete time slots.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Operands};
use crate::device::Device;
use crate::encode::{
    better, check_instance, encode, solve_once, DependencyRule, Encoding, EncodingConfig, ObjectiveKind,
    SynthesisOptions,
};
use crate::error::SynthesisError;
use crate::model::{Assignment, Solver};
use crate::result::{replay_trajectory, GatePlacement, SwapPlacement, SynthesisResult};

/// Blocks of gates separated by transitions. Transition `b` is a set of
/// pairwise node-disjoint SWAPs applied between block `b` and block `b + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionPlan {
    /// Coarse time bound of the model that produced the plan.
    pub time_bound: usize,
    pub block_of: Vec<usize>,
    /// Gate locations: node for single-qubit gates, edge for two-qubit ones.
    pub locations: Vec<usize>,
    /// `block_mappings[b][q]`.
    pub block_mappings: Vec<Vec<usize>>,
    /// One edge list per gap, `num_blocks() - 1` of them.
    pub transitions: Vec<Vec<usize>>,
    pub objective_value: Option<i64>,
}

impl TransitionPlan {
    pub fn num_blocks(&self) -> usize {
        self.block_mappings.len()
    }

    pub fn swap_count(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// Checks the structural invariants against the instance.
    pub fn validate(&self, circuit: &Circuit, device: &Device) -> Result<(), SynthesisError> {
        let bad = |msg: alloc::string::String| Err(SynthesisError::InvalidPlan(msg));
        let blocks = self.num_blocks();
        if blocks == 0 || self.transitions.len() + 1 != blocks {
            return bad(format!("{blocks} blocks with {} transitions", self.transitions.len()));
        }
        if self.block_of.len() != circuit.len() || self.locations.len() != circuit.len() {
            return bad(format!("plan covers {} gates, circuit has {}", self.block_of.len(), circuit.len()));
        }
        for (b, mapping) in self.block_mappings.iter().enumerate() {
            if mapping.len() != circuit.num_qubits() {
                return bad(format!("block {b} maps {} qubits", mapping.len()));
            }
            for (i, &p) in mapping.iter().enumerate() {
                if p >= device.num_nodes() || mapping[..i].contains(&p) {
                    return bad(format!("block {b} mapping is not injective onto device nodes"));
                }
            }
        }
        for (b, edges) in self.transitions.iter().enumerate() {
            for (i, &k) in edges.iter().enumerate() {
                if k >= device.num_edges() {
                    return bad(format!("transition {b} uses unknown edge {k}"));
                }
                if edges[..i].iter().any(|&k2| device.edge(k2).shares_node(device.edge(k))) {
                    return bad(format!("transition {b} has SWAPs sharing a node"));
                }
            }
            let mut next = self.block_mappings[b].clone();
            apply_swaps(device, &mut next, edges);
            if next != self.block_mappings[b + 1] {
                return bad(format!("transition {b} does not produce the mapping of block {}", b + 1));
            }
        }
        for (l, gate) in circuit.gates().iter().enumerate() {
            let b = self.block_of[l];
            if b >= blocks {
                return bad(format!("gate {l} sits in missing block {b}"));
            }
            let mapping = &self.block_mappings[b];
            let ok = match gate.operands {
                Operands::Single(q) => mapping[q] == self.locations[l],
                Operands::Two(q0, q1) => {
                    self.locations[l] < device.num_edges() && {
                        let e = device.edge(self.locations[l]);
                        e.touches(mapping[q0]) && e.other(mapping[q0]) == Some(mapping[q1])
                    }
                }
            };
            if !ok {
                return bad(format!("gate {l} location disagrees with block {b} mapping"));
            }
        }
        Ok(())
    }
}

fn apply_swaps(device: &Device, mapping: &mut [usize], edges: &[usize]) {
    for &k in edges {
        let e = device.edge(k);
        for p in mapping.iter_mut() {
            if let Some(other) = e.other(*p) {
                *p = other;
            }
        }
    }
}

/// Builds the coarse model: unit-duration SWAPs between blocks and relaxed
/// (or dropped) dependencies.
pub fn encode_tb(
    circuit: &Circuit,
    device: &Device,
    time_bound: usize,
    objective: ObjectiveKind,
    dependencies: DependencyRule,
) -> Result<Encoding, SynthesisError> {
    let mut config = EncodingConfig::coarse(time_bound, objective);
    config.dependencies = dependencies;
    encode(circuit, device, &config)
}

/// Reads a coarse assignment into a plan, dropping blocks after the last one
/// holding a gate.
pub fn decode_plan(encoding: &Encoding, assignment: &Assignment, objective_value: Option<i64>) -> TransitionPlan {
    let vars = &encoding.vars;
    let block_of: Vec<usize> = vars.time.iter().map(|&t| assignment.int(t) as usize).collect();
    let locations = vars.space.iter().map(|&x| assignment.int(x) as usize).collect();
    let blocks = block_of.iter().map(|&b| b + 1).max().unwrap_or(1);
    let block_mappings = (0..blocks)
        .map(|t| vars.pi.iter().map(|row| assignment.int(row[t]) as usize).collect())
        .collect();
    let transitions = (0..blocks - 1)
        .map(|t| {
            (0..vars.sigma.len())
                .filter(|&k| assignment.bool(vars.sigma[k][t]))
                .collect()
        })
        .collect();
    TransitionPlan {
        time_bound: encoding.config.time_bound,
        block_of,
        locations,
        block_mappings,
        transitions,
        objective_value,
    }
}

/// Places a plan on the exact time axis. Every physical node keeps the first
/// slot it is free; gates go as early as their nodes and dependency
/// predecessors allow, and each transition's SWAPs start as soon as both
/// endpoints are free.
pub fn asap_schedule(
    plan: &TransitionPlan,
    circuit: &Circuit,
    device: &Device,
    swap_duration: usize,
) -> Result<SynthesisResult, SynthesisError> {
    if swap_duration == 0 {
        return Err(SynthesisError::Config("swap duration must be at least 1"));
    }
    plan.validate(circuit, device)?;
    let preds = circuit.predecessors();
    let mut ready = vec![0usize; device.num_nodes()];
    let mut times = vec![0usize; circuit.len()];
    let mut swaps = Vec::new();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); plan.num_blocks()];
    for (l, &b) in plan.block_of.iter().enumerate() {
        members[b].push(l);
    }
    for (b, gates) in members.iter().enumerate() {
        for &l in gates {
            let nodes = nodes_of(circuit, device, l, plan.locations[l]);
            let after_preds = preds[l].iter().map(|&p| times[p] + 1).max().unwrap_or(0);
            let start = nodes.iter().map(|&p| ready[p]).fold(after_preds, usize::max);
            times[l] = start;
            for &p in &nodes {
                ready[p] = start + 1;
            }
        }
        if let Some(edges) = plan.transitions.get(b) {
            for &k in edges {
                let e = device.edge(k);
                let start = ready[e.p].max(ready[e.q]);
                let finish = start + swap_duration - 1;
                ready[e.p] = finish + 1;
                ready[e.q] = finish + 1;
                swaps.push(SwapPlacement { edge: k, finish_time: finish });
            }
        }
    }
    let gates: Vec<GatePlacement> = times
        .iter()
        .zip(&plan.locations)
        .map(|(&time, &location)| GatePlacement { time, location })
        .collect();
    let last = gates.iter().map(|g| g.time).max();
    swaps.retain(|s| last.is_some_and(|l| s.finish_time <= l));
    let rows = last.map_or(1, |l| l + 1);
    let trajectory = replay_trajectory(device, &plan.block_mappings[0], &swaps, rows);
    let mut result = SynthesisResult::assemble(
        circuit,
        device,
        plan.time_bound,
        gates,
        swaps,
        trajectory,
        plan.objective_value,
    );
    result.depth_blocks = Some(plan.num_blocks());
    Ok(result)
}

fn nodes_of(circuit: &Circuit, device: &Device, gate: usize, location: usize) -> Vec<usize> {
    match circuit.gates()[gate].operands {
        Operands::Single(_) => vec![location],
        Operands::Two(..) => {
            let e = device.edge(location);
            vec![e.p, e.q]
        }
    }
}

/// Grows the coarse bound by one from a single block until satisfiable.
pub(crate) fn solve_plan<S: Solver>(
    circuit: &Circuit,
    device: &Device,
    objective: ObjectiveKind,
    dependencies: DependencyRule,
    options: &SynthesisOptions,
    solver: &mut S,
) -> Result<TransitionPlan, SynthesisError> {
    options.validate()?;
    check_instance(circuit, device)?;
    let mut t = options.initial_time_bound.unwrap_or(1);
    let mut best: Option<TransitionPlan> = None;
    let mut extra_left = options.extra_steps;
    loop {
        if t > options.max_time_bound {
            return best.ok_or(SynthesisError::TimeBoundExhausted {
                cap: options.max_time_bound,
            });
        }
        let encoding = encode_tb(circuit, device, t, objective, dependencies)?;
        if let Some((assignment, value)) = solve_once(solver, &encoding.model, options.timeout, t)? {
            let plan = decode_plan(&encoding, &assignment, value);
            let incumbent = best.as_ref().and_then(|p| p.objective_value);
            if best.is_none() || better(objective, value, incumbent) {
                best = Some(plan);
            }
            if extra_left == 0 {
                return Ok(best.expect("set above"));
            }
            extra_left -= 1;
        }
        t += 1;
    }
}

/// Transition-based synthesis with the circuit's dependencies. The result's
/// `depth_blocks` is the number of gate blocks; its slot times come from
/// [`asap_schedule`] with the configured SWAP duration.
pub fn synthesize_tb<S: Solver>(
    circuit: &Circuit,
    device: &Device,
    objective: ObjectiveKind,
    options: &SynthesisOptions,
    mut solver: S,
) -> Result<(TransitionPlan, SynthesisResult), SynthesisError> {
    let plan = solve_plan(circuit, device, objective, DependencyRule::Relaxed, options, &mut solver)?;
    let result = asap_schedule(&plan, circuit, device, options.swap_duration)?;
    Ok((plan, result))
}
