mod common;

use common::{bundled_circuit, bundled_device, random_cubic, tiny_instance};
use olsq::sat::SatSolver;
use olsq_core::encode::{encode, synthesize, DependencyRule, EncodingConfig, ObjectiveKind, SynthesisOptions};
use olsq_core::model::{Solver, Status};
use olsq_core::oracle::{optimal_cost, CostKind, OracleBounds};
use olsq_core::qaoa::{phase_separation_from_graph, synthesize_qaoa};
use olsq_core::result::scaled_fidelity;
use olsq_core::transition::{asap_schedule, decode_plan, encode_tb, synthesize_tb};
use olsq_core::verify::{check_result, metrics, Family};
use olsq_core::{Circuit, Device, FidelityProfile, Gate, SwapPlacement, SynthesisError, SynthesisResult};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn exact(c: &Circuit, d: &Device, obj: ObjectiveKind) -> SynthesisResult {
    synthesize(c, d, obj, &SynthesisOptions::default(), SatSolver::new()).unwrap()
}

fn assert_valid(c: &Circuit, d: &Device, r: &SynthesisResult, s: usize) {
    let report = check_result(c, d, r, s).unwrap();
    assert!(report.is_valid(), "{:?}", report.violations);
}

fn triangle() -> Circuit {
    Circuit::new(3, vec![Gate::two("cx", 0, 1), Gate::two("cx", 1, 2), Gate::two("cx", 0, 2)])
        .unwrap()
        .prepare()
}

fn cx_chain(m: usize, pairs: &[(usize, usize)]) -> Circuit {
    Circuit::new(m, pairs.iter().map(|&(a, b)| Gate::two("cx", a, b)).collect()).unwrap().prepare()
}

#[test]
fn empty_circuit_encodes_only_mapping() {
    let c = Circuit::new(2, vec![]).unwrap().prepare();
    let d = Device::path(3);
    let enc = encode(&c, &d, &EncodingConfig::exact(1, 3, ObjectiveKind::Swap)).unwrap();
    assert_eq!(enc.model.num_ints(), 2);
    assert_eq!(enc.model.num_bools(), d.num_edges());
    let r = exact(&c, &d, ObjectiveKind::Swap);
    assert_eq!((r.depth_slots, r.swap_count), (0, 0));
    assert_valid(&c, &d, &r, 3);
}

#[test]
fn single_gate_short_bound() {
    let c = cx_chain(2, &[(0, 1)]);
    let d = Device::path(2);
    let enc = encode(&c, &d, &EncodingConfig::exact(1, 3, ObjectiveKind::Swap)).unwrap();
    let v = SatSolver::new().solve(&enc.model, None).unwrap();
    assert_eq!(v.status, Status::Satisfiable);
    let a = v.assignment.unwrap();
    assert_eq!(a.int(enc.vars.time[0]), 0);
    assert!(enc.vars.all_sigma().all(|s| !a.bool(s)));
}

#[test]
fn variable_count_law() {
    let c = bundled_circuit("adder");
    let d = bundled_device("qx2");
    let t = c.longest_chain();
    let (m, l, k) = (c.num_qubits(), c.len(), d.num_edges());
    for (obj, extra) in [(ObjectiveKind::Swap, 0), (ObjectiveKind::Depth, 1)] {
        let enc = encode(&c, &d, &EncodingConfig::exact(t, 3, obj)).unwrap();
        assert_eq!(enc.model.num_ints() + enc.model.num_bools(), m * t + 2 * l + k * t + extra);
    }
}

#[test]
fn depth_objective_examples() {
    let d = Device::grid(2, 2);
    let one = cx_chain(2, &[(0, 1)]);
    let r = exact(&one, &d, ObjectiveKind::Depth);
    assert_eq!((r.objective_value, r.depth_slots), (Some(0), 1));
    let parallel = cx_chain(4, &[(0, 1), (2, 3)]);
    let r = exact(&parallel, &d, ObjectiveKind::Depth);
    assert_eq!((r.objective_value, r.depth_slots), (Some(0), 1));
    let serial = cx_chain(2, &[(0, 1), (0, 1), (0, 1)]);
    let r = exact(&serial, &d, ObjectiveKind::Depth);
    assert_eq!((r.objective_value, r.depth_slots), (Some(2), 3));
}

#[test]
fn swap_objective_examples() {
    let path3 = Device::path(3);
    assert_eq!(exact(&cx_chain(3, &[(0, 1), (1, 2)]), &path3, ObjectiveKind::Swap).swap_count, 0);
    let r = exact(&triangle(), &path3, ObjectiveKind::Swap);
    assert_eq!(r.swap_count, 1);
    assert_valid(&triangle(), &path3, &r, 3);
    let empty = Circuit::new(3, vec![]).unwrap().prepare();
    assert_eq!(exact(&empty, &path3, ObjectiveKind::Swap).swap_count, 0);
}

#[test]
fn fidelity_objective_examples() {
    let perfect = Device::new(3, &[(0, 1), (1, 2)], Some(FidelityProfile::uniform(3, 2, 1.0, 1.0, 1.0))).unwrap();
    let r = exact(&triangle(), &perfect, ObjectiveKind::Fidelity);
    assert_eq!(r.objective_value, Some(0));

    let profile = FidelityProfile::uniform(4, 4, 0.97, 0.999, 0.95);
    let d = Device::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], Some(profile)).unwrap();
    let c = Circuit::new(3, vec![Gate::single("h", 0), Gate::two("cx", 0, 1), Gate::two("cx", 1, 2)])
        .unwrap()
        .prepare();
    let r = exact(&c, &d, ObjectiveKind::Fidelity);
    assert_eq!(r.swap_count, 0);
    let expected = 3 * d.scaled_measure(0) + d.scaled_single(0) + 2 * d.scaled_two(0);
    assert_eq!(r.objective_value, Some(expected));
    let mut swaps = r.swaps.clone();
    swaps.push(SwapPlacement { edge: 0, finish_time: 7 });
    let with_swap = scaled_fidelity(&c, &d, &r.gates, &swaps, r.final_mapping());
    assert_eq!(with_swap, expected + 3 * d.scaled_two(0));
}

#[test]
fn bundled_swap_rows() {
    let qx2 = bundled_device("qx2");
    assert_eq!(exact(&bundled_circuit("or"), &qx2, ObjectiveKind::Swap).additional_cx(), 0);
    assert_eq!(exact(&bundled_circuit("adder"), &qx2, ObjectiveKind::Swap).additional_cx(), 3);
    assert_eq!(exact(&bundled_circuit("adder"), &bundled_device("grid2x3"), ObjectiveKind::Swap).swap_count, 0);
}

#[test]
fn time_bound_cap_and_timeout_are_distinct() {
    let options = SynthesisOptions {
        max_time_bound: 3,
        ..SynthesisOptions::default()
    };
    let err = synthesize(&triangle(), &Device::path(3), ObjectiveKind::Swap, &options, SatSolver::new()).unwrap_err();
    assert!(matches!(err, SynthesisError::TimeBoundExhausted { .. }), "{err:?}");
    let options = SynthesisOptions {
        timeout: Some(std::time::Duration::ZERO),
        ..SynthesisOptions::default()
    };
    let err = synthesize(&bundled_circuit("adder"), &bundled_device("qx2"), ObjectiveKind::Swap, &options, SatSolver::new())
        .unwrap_err();
    assert!(matches!(err, SynthesisError::Timeout { .. }), "{err:?}");
}

#[test]
fn larger_bounds_never_worse() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..15 {
        let (c, d) = tiny_instance(&mut rng);
        for obj in [ObjectiveKind::Swap, ObjectiveKind::Depth, ObjectiveKind::Fidelity] {
            let first = exact(&c, &d, obj);
            assert!(first.depth_slots >= c.longest_chain());
            let options = SynthesisOptions {
                initial_time_bound: Some(first.solver_t + 2),
                ..SynthesisOptions::default()
            };
            let wider = synthesize(&c, &d, obj, &options, SatSolver::new()).unwrap();
            assert_valid(&c, &d, &wider, 3);
            let (a, b) = (first.objective_value.unwrap(), wider.objective_value.unwrap());
            match obj {
                ObjectiveKind::Fidelity => assert!(b >= a),
                _ => assert!(b <= a),
            }
        }
    }
}

#[test]
fn extra_steps_keep_the_best() {
    let c = bundled_circuit("adder");
    let d = bundled_device("qx2");
    let options = SynthesisOptions {
        extra_steps: 1,
        ..SynthesisOptions::default()
    };
    let r = synthesize(&c, &d, ObjectiveKind::Swap, &options, SatSolver::new()).unwrap();
    assert_eq!(r.swap_count, 1);
    assert_valid(&c, &d, &r, 3);
}

#[test]
fn coarse_model_examples() {
    let path3 = Device::path(3);
    let in_place = cx_chain(3, &[(0, 1), (1, 2)]);
    let enc = encode_tb(&in_place, &path3, 1, ObjectiveKind::Swap, DependencyRule::Relaxed).unwrap();
    let v = SatSolver::new().solve(&enc.model, None).unwrap();
    let plan = decode_plan(&enc, v.assignment.as_ref().unwrap(), v.objective_value);
    assert!(plan.block_of.iter().all(|&b| b == 0));
    assert!(plan.transitions.is_empty());

    let tri = triangle();
    let enc = encode_tb(&tri, &path3, 1, ObjectiveKind::Swap, DependencyRule::Relaxed).unwrap();
    assert_eq!(SatSolver::new().solve(&enc.model, None).unwrap().status, Status::Unsatisfiable);
    let enc = encode_tb(&tri, &path3, 2, ObjectiveKind::Swap, DependencyRule::Relaxed).unwrap();
    let v = SatSolver::new().solve(&enc.model, None).unwrap();
    assert_eq!(v.objective_value, Some(1));
    let plan = decode_plan(&enc, v.assignment.as_ref().unwrap(), v.objective_value);
    plan.validate(&tri, &path3).unwrap();
    assert_eq!(plan.swap_count(), 1);
    let r = asap_schedule(&plan, &tri, &path3, 3).unwrap();
    assert_valid(&tri, &path3, &r, 3);
}

#[test]
fn transition_based_examples() {
    let qx2 = bundled_device("qx2");
    let opts = SynthesisOptions::default();
    let (plan, r) = synthesize_tb(&bundled_circuit("adder"), &qx2, ObjectiveKind::Swap, &opts, SatSolver::new()).unwrap();
    assert_eq!(r.additional_cx(), 3);
    assert_eq!(r.depth_blocks, Some(plan.num_blocks()));
    let (_, r) = synthesize_tb(&bundled_circuit("or"), &qx2, ObjectiveKind::Swap, &opts, SatSolver::new()).unwrap();
    assert_eq!(r.swap_count, 0);

    let empty = Circuit::new(2, vec![]).unwrap().prepare();
    let (plan, r) = synthesize_tb(&empty, &qx2, ObjectiveKind::Swap, &opts, SatSolver::new()).unwrap();
    assert_eq!((plan.time_bound, plan.transitions.len(), r.depth_slots), (1, 0, 0));
}

#[test]
fn transition_based_never_beats_exact() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..20 {
        let (c, d) = tiny_instance(&mut rng);
        let e = exact(&c, &d, ObjectiveKind::Swap);
        let (plan, tb) = synthesize_tb(&c, &d, ObjectiveKind::Swap, &SynthesisOptions::default(), SatSolver::new()).unwrap();
        plan.validate(&c, &d).unwrap();
        assert_valid(&c, &d, &tb, 3);
        assert!(tb.swap_count >= e.swap_count);
        let bound = OracleBounds {
            max_slots: tb.depth_slots.max(1),
            swap_duration: 3,
        };
        assert!(optimal_cost(&c, &d, CostKind::Swap, bound).unwrap() <= tb.swap_count);
    }
}

fn qaoa(c: &Circuit, d: &Device, s: usize) -> SynthesisResult {
    let options = SynthesisOptions {
        swap_duration: s,
        ..SynthesisOptions::default()
    };
    let out = synthesize_qaoa(c, d, ObjectiveKind::Swap, &options, SatSolver::new()).unwrap();
    let commuting = c.clone().without_dependencies();
    assert_valid(&commuting, d, &out.result, s);
    assert!(out.result.depth_slots <= out.scheduled.depth_slots);
    out.result
}

#[test]
fn qaoa_examples() {
    let qx2 = bundled_device("qx2");
    let tri = phase_separation_from_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let r = qaoa(&tri, &qx2, 1);
    assert_eq!((r.swap_count, r.depth_slots), (0, 3));

    let cycle = phase_separation_from_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let r = qaoa(&cycle, &Device::grid(2, 2), 1);
    assert_eq!((r.swap_count, r.depth_slots), (0, 2));

    let k4 = phase_separation_from_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert!(qaoa(&k4, &qx2, 3).swap_count >= 1);
    assert!(qaoa(&k4, &qx2, 1).swap_count >= 1);
}

#[test]
fn phase_separation_circuits() {
    assert!(phase_separation_from_graph(0, &[]).unwrap().is_empty());
    let mut rng = StdRng::seed_from_u64(3);
    let c = phase_separation_from_graph(10, &random_cubic(&mut rng, 10)).unwrap();
    assert_eq!(c.len(), 15);
    let with_single = Circuit::new(2, vec![Gate::two("zz", 0, 1), Gate::single("rx", 0)]).unwrap().prepare();
    let err = synthesize_qaoa(&with_single, &Device::path(2), ObjectiveKind::Swap, &SynthesisOptions::default(), SatSolver::new());
    assert!(err.is_err());
}

#[test]
fn qaoa_runs_each_gate_once_and_serializes_shared_qubits() {
    let mut rng = StdRng::seed_from_u64(8);
    let c = phase_separation_from_graph(6, &random_cubic(&mut rng, 6)).unwrap();
    let d = Device::grid(2, 3);
    let r = qaoa(&c, &d, 1);
    assert_eq!(r.gates.len(), c.len());
    for (a, ga) in c.gates().iter().enumerate() {
        for (b, gb) in c.gates().iter().enumerate().skip(a + 1) {
            if ga.operands.shares_qubit(gb.operands) {
                assert_ne!(r.gates[a].time, r.gates[b].time);
            }
        }
    }
}

#[test]
fn verifier_tags() {
    let d = Device::path(3);
    let tri = triangle();
    let r = exact(&tri, &d, ObjectiveKind::Swap);

    let mut bad = r.clone();
    bad.mapping_trajectory[0][1] = bad.mapping_trajectory[0][0];
    bad.initial_mapping = bad.mapping_trajectory[0].clone();
    let report = check_result(&tri, &d, &bad, 3).unwrap();
    assert!(report.violations.iter().any(|v| v.family == Family::Injective && v.time == Some(0)));

    let mut early = r.clone();
    early.swaps[0].finish_time = 1;
    let report = check_result(&tri, &d, &early, 3).unwrap();
    assert!(report.families().contains(&Family::SwapStart));

    let mut short = r.clone();
    short.gates.pop();
    assert!(check_result(&tri, &d, &short, 3).is_err());
}

#[test]
fn metrics_examples() {
    let empty = Circuit::new(0, vec![]).unwrap().prepare();
    let d = Device::path(2);
    let r = exact(&empty, &d, ObjectiveKind::Swap);
    let m = metrics(&empty, &d, &r, 3).unwrap();
    assert_eq!((m.depth, m.swap_count, m.fidelity_scaled, m.fidelity), (0, 0, 0, 1.0));

    let d = Device::new(2, &[(0, 1)], Some(FidelityProfile::uniform(2, 1, 1.0, 1.0, 0.99))).unwrap();
    let c = cx_chain(2, &[(0, 1); 5]);
    let r = exact(&c, &d, ObjectiveKind::Swap);
    let m = metrics(&c, &d, &r, 3).unwrap();
    assert_eq!(m.fidelity_scaled, -50);

    let mut with_swap = r.clone();
    with_swap.swaps.push(SwapPlacement { edge: 0, finish_time: 7 });
    let mut traj = vec![r.mapping_trajectory[0].clone(); 8];
    let mut swapped = traj[0].clone();
    swapped.swap(0, 1);
    traj.push(swapped);
    with_swap.mapping_trajectory = traj;
    let m2 = metrics(&c, &d, &with_swap, 3).unwrap();
    assert_eq!(m2.fidelity_scaled, -80);
    assert_eq!(metrics(&c, &d, &with_swap, 3).unwrap(), m2);
    assert!(m2.fidelity > 0.0 && m2.fidelity <= 1.0);
}

#[test]
fn oracle_examples() {
    let bounds = OracleBounds {
        max_slots: 6,
        swap_duration: 3,
    };
    let one = cx_chain(2, &[(0, 1)]);
    for d in [Device::path(2), Device::path(5), Device::grid(2, 2)] {
        assert_eq!(optimal_cost(&one, &d, CostKind::Swap, bounds).unwrap(), 0);
        assert_eq!(optimal_cost(&one, &d, CostKind::Depth, bounds).unwrap(), 1);
    }
    let disjoint = cx_chain(4, &[(0, 1), (2, 3)]);
    let grid = Device::grid(2, 2);
    assert_eq!(optimal_cost(&disjoint, &grid, CostKind::Swap, bounds).unwrap(), 0);
    assert_eq!(optimal_cost(&disjoint, &grid, CostKind::Depth, bounds).unwrap(), 1);
    assert_eq!(optimal_cost(&triangle(), &Device::path(3), CostKind::Swap, bounds).unwrap(), 1);
}
