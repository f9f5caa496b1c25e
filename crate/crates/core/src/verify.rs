//! Independent re-validation of synthesized layouts from concrete values.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Circuit, Operands};
use crate::device::Device;
use crate::error::VerifyError;
use crate::result::{GatePlacement, SynthesisResult};

/// The layout rule a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Two logical qubits on one physical qubit.
    Injective,
    /// A dependency is not strictly ordered in time.
    Dependency,
    /// A single-qubit gate is not where its operand is.
    SingleLocation,
    /// A two-qubit gate's edge does not hold its operands.
    TwoLocation,
    /// A SWAP finishes before a full duration has elapsed.
    SwapStart,
    /// Two SWAPs on one edge overlap in time.
    SwapSelfOverlap,
    /// SWAPs on edges sharing a node overlap in time.
    SwapEdgeOverlap,
    /// A single-qubit gate runs on a qubit of an in-flight SWAP.
    SwapSingleConflict,
    /// A two-qubit gate runs on an edge touching an in-flight SWAP.
    SwapTwoConflict,
    /// A qubit moved without a SWAP.
    MappingHold,
    /// A SWAP did not exchange its endpoints.
    MappingSwap,
    /// Two gates use one physical qubit in the same slot.
    GateOverlap,
    /// The initial mapping is not the first trajectory row.
    InitialMapping,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Injective => "injective-mapping",
            Family::Dependency => "dependency-order",
            Family::SingleLocation => "single-qubit-location",
            Family::TwoLocation => "two-qubit-location",
            Family::SwapStart => "swap-start",
            Family::SwapSelfOverlap => "swap-self-overlap",
            Family::SwapEdgeOverlap => "swap-edge-overlap",
            Family::SwapSingleConflict => "swap-single-qubit-conflict",
            Family::SwapTwoConflict => "swap-two-qubit-conflict",
            Family::MappingHold => "mapping-hold",
            Family::MappingSwap => "mapping-swap",
            Family::GateOverlap => "gate-overlap",
            Family::InitialMapping => "initial-mapping",
        }
    }
}

impl core::fmt::Display for Family {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// One broken rule with the entities involved. `swaps` index into the
/// result's SWAP list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub family: Family,
    pub time: Option<usize>,
    pub gates: Vec<usize>,
    pub swaps: Vec<usize>,
    pub qubits: Vec<usize>,
    pub detail: String,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[{}]", self.family)?;
        if let Some(t) = self.time {
            write!(f, " t={t}")?;
        }
        write!(f, " {}", self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn families(&self) -> Vec<Family> {
        let mut f: Vec<Family> = self.violations.iter().map(|v| v.family).collect();
        f.sort_unstable();
        f.dedup();
        f
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn push(&mut self, family: Family, time: Option<usize>, gates: &[usize], swaps: &[usize], qubits: &[usize], detail: String) {
        self.0.push(Violation {
            family,
            time,
            gates: gates.to_vec(),
            swaps: swaps.to_vec(),
            qubits: qubits.to_vec(),
            detail,
        });
    }
}

fn check_dimensions(circuit: &Circuit, device: &Device, result: &SynthesisResult) -> Result<(), VerifyError> {
    let fail = |m: String| Err(VerifyError::DimensionMismatch(m));
    let m = circuit.num_qubits();
    let n = device.num_nodes();
    if result.gates.len() != circuit.len() {
        return fail(format!("{} gate placements for {} gates", result.gates.len(), circuit.len()));
    }
    if result.initial_mapping.len() != m {
        return fail(format!("initial mapping has {} entries for {m} qubits", result.initial_mapping.len()));
    }
    if result.mapping_trajectory.is_empty() {
        return fail("empty mapping trajectory".into());
    }
    for (t, row) in result.mapping_trajectory.iter().enumerate() {
        if row.len() != m {
            return fail(format!("trajectory row {t} has {} entries for {m} qubits", row.len()));
        }
        if let Some(&p) = row.iter().find(|&&p| p >= n) {
            return fail(format!("trajectory row {t} names node {p} outside 0..{n}"));
        }
    }
    if let Some(&p) = result.initial_mapping.iter().find(|&&p| p >= n) {
        return fail(format!("initial mapping names node {p} outside 0..{n}"));
    }
    let rows = result.mapping_trajectory.len();
    for (l, (gate, placed)) in circuit.gates().iter().zip(&result.gates).enumerate() {
        let limit = match gate.operands {
            Operands::Single(_) => n,
            Operands::Two(..) => device.num_edges(),
        };
        if placed.location >= limit {
            return fail(format!("gate {l} location {} outside 0..{limit}", placed.location));
        }
        if placed.time >= rows {
            return fail(format!("gate {l} at slot {} beyond the {rows}-row trajectory", placed.time));
        }
    }
    for (i, s) in result.swaps.iter().enumerate() {
        if s.edge >= device.num_edges() {
            return fail(format!("swap {i} on unknown edge {}", s.edge));
        }
    }
    Ok(())
}

fn physical_nodes(circuit: &Circuit, device: &Device, gate: usize, placed: &GatePlacement) -> Vec<usize> {
    match circuit.gates()[gate].operands {
        Operands::Single(_) => vec![placed.location],
        Operands::Two(..) => {
            let e = device.edge(placed.location);
            vec![e.p, e.q]
        }
    }
}

/// Re-derives every layout rule from the result's values. Dependencies are
/// checked strictly, so transition-based plans must be scheduled first.
pub fn check_result(
    circuit: &Circuit,
    device: &Device,
    result: &SynthesisResult,
    swap_duration: usize,
) -> Result<Report, VerifyError> {
    check_dimensions(circuit, device, result)?;
    let s = swap_duration.max(1);
    let traj = &result.mapping_trajectory;
    let mut out = Collector(Vec::new());

    if result.initial_mapping != traj[0] {
        out.push(Family::InitialMapping, Some(0), &[], &[], &[], "initial mapping differs from trajectory row 0".into());
    }

    for (t, row) in traj.iter().enumerate() {
        for a in 0..row.len() {
            for b in a + 1..row.len() {
                if row[a] == row[b] {
                    out.push(Family::Injective, Some(t), &[], &[], &[a, b], format!("q{a} and q{b} both on p{}", row[a]));
                }
            }
        }
    }

    for &(a, b) in circuit.dependencies() {
        let (ta, tb) = (result.gates[a].time, result.gates[b].time);
        if ta >= tb {
            out.push(Family::Dependency, Some(tb), &[a, b], &[], &[], format!("gate {a} at {ta} must precede gate {b} at {tb}"));
        }
    }

    for (l, (gate, placed)) in circuit.gates().iter().zip(&result.gates).enumerate() {
        let row = &traj[placed.time];
        match gate.operands {
            Operands::Single(q) => {
                if row[q] != placed.location {
                    out.push(
                        Family::SingleLocation,
                        Some(placed.time),
                        &[l],
                        &[],
                        &[q],
                        format!("gate {l} on p{} but q{q} is on p{}", placed.location, row[q]),
                    );
                }
            }
            Operands::Two(a, b) => {
                let e = device.edge(placed.location);
                let fits = (row[a] == e.p && row[b] == e.q) || (row[a] == e.q && row[b] == e.p);
                if !fits {
                    out.push(
                        Family::TwoLocation,
                        Some(placed.time),
                        &[l],
                        &[],
                        &[a, b],
                        format!("gate {l} on edge {} ({}, {}) but operands are on p{} and p{}", placed.location, e.p, e.q, row[a], row[b]),
                    );
                }
            }
        }
    }

    let swaps = &result.swaps;
    for (i, sw) in swaps.iter().enumerate() {
        if sw.finish_time + 1 < s {
            out.push(Family::SwapStart, Some(sw.finish_time), &[], &[i], &[], format!("swap {i} finishes before {s} slots elapse"));
        }
    }
    for i in 0..swaps.len() {
        for j in i + 1..swaps.len() {
            let (a, b) = (swaps[i], swaps[j]);
            if a.finish_time.abs_diff(b.finish_time) >= s {
                continue;
            }
            let later = a.finish_time.max(b.finish_time);
            if a.edge == b.edge {
                out.push(Family::SwapSelfOverlap, Some(later), &[], &[i, j], &[], format!("swaps {i} and {j} overlap on edge {}", a.edge));
            } else if device.edge(a.edge).shares_node(device.edge(b.edge)) {
                out.push(
                    Family::SwapEdgeOverlap,
                    Some(later),
                    &[],
                    &[i, j],
                    &[],
                    format!("swaps {i} and {j} overlap on adjacent edges {} and {}", a.edge, b.edge),
                );
            }
        }
    }
    for (i, sw) in swaps.iter().enumerate() {
        let e = device.edge(sw.edge);
        let lo = (sw.finish_time + 1).saturating_sub(s);
        for (l, (gate, placed)) in circuit.gates().iter().zip(&result.gates).enumerate() {
            if placed.time < lo || placed.time > sw.finish_time {
                continue;
            }
            match gate.operands {
                Operands::Single(_) => {
                    if e.touches(placed.location) {
                        out.push(
                            Family::SwapSingleConflict,
                            Some(placed.time),
                            &[l],
                            &[i],
                            &[],
                            format!("gate {l} on p{} during swap {i}", placed.location),
                        );
                    }
                }
                Operands::Two(..) => {
                    let g = device.edge(placed.location);
                    if placed.location == sw.edge || g.shares_node(e) {
                        out.push(
                            Family::SwapTwoConflict,
                            Some(placed.time),
                            &[l],
                            &[i],
                            &[],
                            format!("gate {l} on edge {} during swap {i} on edge {}", placed.location, sw.edge),
                        );
                    }
                }
            }
        }
    }

    for t in 0..traj.len() - 1 {
        let finishing: Vec<usize> = (0..swaps.len()).filter(|&i| swaps[i].finish_time == t).collect();
        let mut expected = traj[t].clone();
        for &i in &finishing {
            let e = device.edge(swaps[i].edge);
            for p in expected.iter_mut() {
                if let Some(o) = e.other(*p) {
                    *p = o;
                }
            }
        }
        for q in 0..expected.len() {
            if expected[q] == traj[t + 1][q] {
                continue;
            }
            let p = traj[t][q];
            let involved: Vec<usize> = finishing.iter().copied().filter(|&i| device.edge(swaps[i].edge).touches(p)).collect();
            let family = if involved.is_empty() { Family::MappingHold } else { Family::MappingSwap };
            out.push(
                family,
                Some(t + 1),
                &[],
                &involved,
                &[q],
                format!("q{q} moves from p{p} to p{} but should be on p{}", traj[t + 1][q], expected[q]),
            );
        }
    }

    let mut by_time: Vec<(usize, usize)> = result.gates.iter().enumerate().map(|(l, g)| (g.time, l)).collect();
    by_time.sort_unstable();
    for (i, &(t, a)) in by_time.iter().enumerate() {
        let na = physical_nodes(circuit, device, a, &result.gates[a]);
        for &(_, b) in by_time[i + 1..].iter().take_while(|x| x.0 == t) {
            let nb = physical_nodes(circuit, device, b, &result.gates[b]);
            if na.iter().any(|p| nb.contains(p)) {
                out.push(Family::GateOverlap, Some(t), &[a, b], &[], &[], format!("gates {a} and {b} share a physical qubit"));
            }
        }
    }

    Ok(Report { violations: out.0 })
}

/// Metrics of a validated result.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub depth: usize,
    pub swap_count: usize,
    pub fidelity_scaled: i64,
    /// Product of the raw fidelities.
    pub fidelity: f64,
}

/// Computes metrics for a result the checker accepts.
pub fn metrics(
    circuit: &Circuit,
    device: &Device,
    result: &SynthesisResult,
    swap_duration: usize,
) -> Result<Metrics, VerifyError> {
    let report = check_result(circuit, device, result, swap_duration)?;
    if !report.is_valid() {
        return Err(VerifyError::Unchecked(report.violations.len()));
    }
    let prof = device.fidelity();
    let last = result.mapping_trajectory.last().expect("checked non-empty");
    let mut log = 0.0;
    for &p in last {
        log += libm::log(prof.measure[p]);
    }
    for (gate, placed) in circuit.gates().iter().zip(&result.gates) {
        log += match gate.operands {
            Operands::Single(_) => libm::log(prof.single[placed.location]),
            Operands::Two(..) => libm::log(prof.two[placed.location]),
        };
    }
    for sw in &result.swaps {
        log += 3.0 * libm::log(prof.two[sw.edge]);
    }
    Ok(Metrics {
        depth: crate::result::depth_of(&result.gates),
        swap_count: result.swaps.len(),
        fidelity_scaled: crate::result::scaled_fidelity(circuit, device, &result.gates, &result.swaps, last),
        fidelity: libm::exp(log),
    })
}
