#![allow(dead_code)]

use std::path::PathBuf;

use olsq_core::verify::Violation;
use olsq_core::{Circuit, Device, Gate, SynthesisResult};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data(rel: &str) -> PathBuf {
    olsq::data_dir().join(rel)
}

pub fn bundled_circuit(name: &str) -> Circuit {
    olsq::load_circuit(&data(&format!("circuits/{name}.txt"))).unwrap()
}

pub fn bundled_device(name: &str) -> Device {
    olsq::load_device_file(&data(&format!("devices/{name}.json"))).unwrap()
}

/// A connected graph: a random spanning tree plus a few extra edges.
pub fn random_connected(rng: &mut StdRng, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.push((a.min(b), a.max(b)));
    }
    for _ in 0..rng.random_range(0..=2) {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges
}

pub fn random_circuit(rng: &mut StdRng, m: usize, l: usize) -> Circuit {
    let mut gates = Vec::with_capacity(l);
    for _ in 0..l {
        if m >= 2 && rng.random_bool(0.7) {
            let a = rng.random_range(0..m);
            let mut b = rng.random_range(0..m - 1);
            if b >= a {
                b += 1;
            }
            gates.push(Gate::two("cx", a, b));
        } else {
            gates.push(Gate::single("h", rng.random_range(0..m)));
        }
    }
    Circuit::new(m, gates).unwrap().prepare()
}

/// A tiny instance within the exhaustive oracle's limits.
pub fn tiny_instance(rng: &mut StdRng) -> (Circuit, Device) {
    let n = rng.random_range(2..=5);
    let m = rng.random_range(1..=n.min(4));
    let l = rng.random_range(1..=6);
    let device = Device::new(n, &random_connected(rng, n), None).unwrap();
    (random_circuit(rng, m, l), device)
}

/// A random simple 3-regular graph by pairing with rejection.
pub fn random_cubic(rng: &mut StdRng, n: usize) -> Vec<(usize, usize)> {
    assert!(n % 2 == 0 && n >= 4);
    'retry: loop {
        let mut points: Vec<usize> = (0..3 * n).map(|i| i / 3).collect();
        points.shuffle(rng);
        let mut edges = Vec::with_capacity(3 * n / 2);
        for pair in points.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || edges.contains(&(a, b)) {
                continue 'retry;
            }
            edges.push((a, b));
        }
        return edges;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Gate(usize),
    Swap(usize),
    Cell { qubit: usize, time: usize },
    Initial(usize),
}

#[derive(Debug, Clone)]
pub struct Mutation {
    pub entity: Entity,
    pub field: &'static str,
    pub result: SynthesisResult,
    /// Slots whose rule checks the mutation can disturb.
    pub times: Vec<usize>,
}

fn different(rng: &mut StdRng, old: usize, bound: usize) -> Option<usize> {
    if bound < 2 {
        return None;
    }
    let mut v = rng.random_range(0..bound - 1);
    if v >= old {
        v += 1;
    }
    Some(v)
}

/// One random single-field change of a result. Values stay within the
/// result's dimensions so the checker reports rules rather than shapes.
pub fn mutate(rng: &mut StdRng, circuit: &Circuit, device: &Device, result: &SynthesisResult) -> Option<Mutation> {
    let rows = result.mapping_trajectory.len();
    let m = circuit.num_qubits();
    let n = device.num_nodes();
    let mut r = result.clone();
    let choice = rng.random_range(0..6);
    let (entity, field, times) = match choice {
        0 | 1 if !r.gates.is_empty() => {
            let l = rng.random_range(0..r.gates.len());
            if choice == 0 {
                let old = r.gates[l].time;
                let new = different(rng, old, rows)?;
                r.gates[l].time = new;
                (Entity::Gate(l), "time", vec![old, new])
            } else {
                let bound = if circuit.gates()[l].kind() == olsq_core::GateKind::Single { n } else { device.num_edges() };
                let old = r.gates[l].location;
                r.gates[l].location = different(rng, old, bound)?;
                (Entity::Gate(l), "location", vec![r.gates[l].time])
            }
        }
        2 | 3 if !r.swaps.is_empty() => {
            let i = rng.random_range(0..r.swaps.len());
            let old = r.swaps[i].finish_time;
            if choice == 2 {
                r.swaps[i].edge = different(rng, r.swaps[i].edge, device.num_edges())?;
                (Entity::Swap(i), "edge", vec![old + 1])
            } else {
                let new = different(rng, old, rows)?;
                r.swaps[i].finish_time = new;
                (Entity::Swap(i), "finish_time", vec![old + 1, new + 1])
            }
        }
        4 if m > 0 => {
            let q = rng.random_range(0..m);
            let t = rng.random_range(0..rows);
            let old = r.mapping_trajectory[t][q];
            r.mapping_trajectory[t][q] = different(rng, old, n)?;
            (Entity::Cell { qubit: q, time: t }, "mapping_trajectory", vec![t, t + 1])
        }
        5 if m > 0 => {
            let q = rng.random_range(0..m);
            let old = r.initial_mapping[q];
            r.initial_mapping[q] = different(rng, old, n)?;
            (Entity::Initial(q), "initial_mapping", vec![0])
        }
        _ => return None,
    };
    Some(Mutation {
        entity,
        field,
        result: r,
        times,
    })
}

/// Whether a violation points at the mutated entity: by index, or by the
/// mapping-transition slot the change disturbs.
pub fn mentions(v: &Violation, m: &Mutation) -> bool {
    let at_time = v.time.is_some_and(|t| m.times.contains(&t));
    match m.entity {
        Entity::Gate(l) => v.gates.contains(&l),
        Entity::Swap(i) => v.swaps.contains(&i) || at_time,
        Entity::Cell { qubit, .. } => v.qubits.contains(&qubit) && at_time || at_time && !v.gates.is_empty(),
        Entity::Initial(_) => v.family == olsq_core::verify::Family::InitialMapping,
    }
}
