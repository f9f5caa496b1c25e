//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::{data, mentions, mutate, random_cubic, tiny_instance};
use olsq::bench::load_manifest;
use olsq::run::{self, Mode, Objective};
use olsq::sat::SatSolver;
use olsq_core::encode::{synthesize, ObjectiveKind, SynthesisOptions};
use olsq_core::oracle::{optimal_cost, CostKind, OracleBounds};
use olsq_core::qaoa::{phase_separation_from_graph, synthesize_qaoa};
use olsq_core::transition::synthesize_tb;
use olsq_core::verify::{check_result, metrics};
use olsq_core::{Circuit, Device, FidelityProfile, SynthesisResult};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Case {
    label: String,
    circuit: Circuit,
    device: Device,
    swap_duration: usize,
    result: SynthesisResult,
}

struct Report {
    lines: Vec<(usize, bool, String)>,
}

impl Report {
    fn record(&mut self, n: usize, pass: bool, detail: String) {
        println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
        self.lines.push((n, pass, detail));
    }
}

fn stem(p: &str) -> String {
    std::path::Path::new(p).file_stem().unwrap().to_string_lossy().into_owned()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn main() {
    let mut report = Report { lines: Vec::new() };
    let mut pool: Vec<Case> = Vec::new();

    let manifest = data("manifests/acceptance.csv");
    let base = manifest.parent().unwrap().to_path_buf();
    let rows = load_manifest(&manifest).unwrap();
    let mut table: BTreeMap<(String, String, Mode, Objective), (SynthesisResult, f64)> = BTreeMap::new();
    for row in &rows {
        let circuit = olsq::load_circuit(&base.join(&row.circuit)).unwrap();
        let device = olsq::load_device_file(&base.join(&row.device)).unwrap();
        let options = SynthesisOptions::default();
        let (result, secs) = timed(|| run::synthesize(&circuit, &device, row.mode, row.objective, &options));
        let result = result.unwrap();
        let key = (stem(&row.circuit), stem(&row.device), row.mode, row.objective);
        pool.push(Case {
            label: format!("{}/{}/{}/{}", key.0, key.1, row.mode.name(), row.objective.name()),
            circuit,
            device,
            swap_duration: 3,
            result: result.clone(),
        });
        table.insert(key, (result, secs));
    }
    let get = |c: &str, d: &str, m: Mode, o: Objective| &table[&(c.to_string(), d.to_string(), m, o)];

    let swap_rows = [("or", "qx2", 0), ("adder", "qx2", 3), ("adder", "grid2x3", 0), ("adder", "grid2x4", 0), ("4mod5-v1_22", "qx2", 3)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (c, d, expected) in swap_rows {
        let got = get(c, d, Mode::Exact, Objective::Swap).0.additional_cx();
        ok &= got == expected;
        detail.push(format!("{c}/{d} c={got} (table {expected})"));
    }
    report.record(1, ok, detail.join(", "));

    let depth_rows = [("or", 9), ("adder", 16), ("qaoa5", 15)];
    let offsets: Vec<i64> = depth_rows
        .iter()
        .map(|&(c, d)| d - get(c, "qx2", Mode::Exact, Objective::Depth).0.depth_slots as i64)
        .collect();
    let ok = offsets.iter().all(|&o| o == offsets[0] && o.abs() <= 1);
    let detail = depth_rows
        .iter()
        .map(|&(c, d)| format!("{c}/qx2 d={} (table {d})", get(c, "qx2", Mode::Exact, Objective::Depth).0.depth_slots))
        .collect::<Vec<_>>();
    report.record(2, ok, format!("{}; offset {:?}", detail.join(", "), offsets));

    let mut ok = true;
    let mut detail = Vec::new();
    for (c, d, _) in swap_rows {
        let e = get(c, d, Mode::Exact, Objective::Swap).0.swap_count;
        let t = get(c, d, Mode::Tb, Objective::Swap).0.swap_count;
        ok &= e == t;
        detail.push(format!("{c}/{d} {t}={e}"));
    }
    let adder = olsq::load_circuit(&data("circuits/adder.txt")).unwrap();
    let qx2 = olsq::load_device_file(&data("devices/qx2.json")).unwrap();
    let best_of = |mode: Mode| {
        (0..3)
            .map(|_| timed(|| run::synthesize(&adder, &qx2, mode, Objective::Swap, &SynthesisOptions::default())).1)
            .fold(f64::INFINITY, f64::min)
    };
    let (t_exact, t_tb) = (best_of(Mode::Exact), best_of(Mode::Tb));
    ok &= t_tb < t_exact;
    report.record(3, ok, format!("swaps tb=exact: {}; adder/qx2 runtime tb {t_tb:.3}s < exact {t_exact:.3}s", detail.join(", ")));

    let mut rng = StdRng::seed_from_u64(2024);
    let (mut agree, mut total, mut mismatches) = (0, 0, Vec::new());
    let (_, secs) = timed(|| {
        for i in 0..60 {
            let (circuit, device) = tiny_instance(&mut rng);
            let s = if rng.random_bool(0.5) { 3 } else { 1 };
            let options = SynthesisOptions {
                swap_duration: s,
                ..SynthesisOptions::default()
            };
            let rs = synthesize(&circuit, &device, ObjectiveKind::Swap, &options, SatSolver::new()).unwrap();
            let rd = synthesize(&circuit, &device, ObjectiveKind::Depth, &options, SatSolver::new()).unwrap();
            let swap_bound = OracleBounds {
                max_slots: rs.solver_t,
                swap_duration: s,
            };
            let depth_bound = OracleBounds {
                max_slots: rd.solver_t,
                swap_duration: s,
            };
            let os = optimal_cost(&circuit, &device, CostKind::Swap, swap_bound).unwrap();
            let od = optimal_cost(&circuit, &device, CostKind::Depth, depth_bound).unwrap();
            let depth_value = rd.objective_value.map_or(0, |v| v as usize + 1);
            total += 1;
            if os == rs.swap_count && od == depth_value && od == rd.depth_slots {
                agree += 1;
            } else {
                mismatches.push(format!("#{i}: swap {}/{os} depth {}/{od}", rs.swap_count, depth_value));
            }
            for (kind, r) in [("swap", rs), ("depth", rd)] {
                pool.push(Case {
                    label: format!("random#{i}/{kind}"),
                    circuit: circuit.clone(),
                    device: device.clone(),
                    swap_duration: s,
                    result: r,
                });
            }
        }
    });
    report.record(
        4,
        agree == total && total >= 50,
        format!("{agree}/{total} instances match the oracle in {secs:.1}s {}", mismatches.join("; ")),
    );

    let mut invalid = Vec::new();
    for case in &pool {
        let r = check_result(&case.circuit, &case.device, &case.result, case.swap_duration).unwrap();
        if !r.is_valid() {
            invalid.push(format!("{}: {}", case.label, r.violations[0]));
        }
    }
    let mut rng = StdRng::seed_from_u64(99);
    let (mut tried, mut caught, mut by_field) = (0usize, 0usize, BTreeMap::<&str, (usize, usize)>::new());
    for case in &pool {
        for _ in 0..25 {
            let Some(m) = mutate(&mut rng, &case.circuit, &case.device, &case.result) else { continue };
            tried += 1;
            let entry = by_field.entry(m.field).or_default();
            entry.0 += 1;
            let hit = match check_result(&case.circuit, &case.device, &m.result, case.swap_duration) {
                Ok(rep) => rep.violations.iter().any(|v| mentions(v, &m)),
                Err(_) => false,
            };
            if hit {
                caught += 1;
                entry.1 += 1;
            }
        }
    }
    let rate = caught as f64 / tried.max(1) as f64;
    let fields: Vec<String> = by_field.iter().map(|(f, (n, c))| format!("{f} {c}/{n}")).collect();
    report.record(
        5,
        invalid.is_empty() && rate >= 0.95,
        format!(
            "{}/{} outputs valid; {caught}/{tried} mutations rejected and tagged ({:.1}%): {} {}",
            pool.len() - invalid.len(),
            pool.len(),
            rate * 100.0,
            fields.join(", "),
            invalid.join("; ")
        ),
    );

    let mut fid_cases: Vec<(String, Circuit, Device, SynthesisResult)> = Vec::new();
    for c in ["or", "adder"] {
        for d in ["grid2x3", "grid2x4"] {
            let circuit = olsq::load_circuit(&data(&format!("circuits/{c}.txt"))).unwrap();
            let device = olsq::load_device_file(&data(&format!("devices/{d}.json"))).unwrap();
            assert!(device.fidelity().is_uniform());
            for mode in [Mode::Exact, Mode::Tb] {
                let r = run::synthesize(&circuit, &device, mode, Objective::Fidelity, &SynthesisOptions::default()).unwrap();
                fid_cases.push((format!("{c}/{d}/{}", mode.name()), circuit.clone(), device.clone(), r));
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(6);
    for i in 0..20 {
        let (circuit, device) = tiny_instance(&mut rng);
        let (n, k) = (device.num_nodes(), device.num_edges());
        let profile = FidelityProfile::uniform(n, k, rng.random_range(0.9..1.0), rng.random_range(0.99..1.0), rng.random_range(0.9..0.999));
        let edges: Vec<(usize, usize)> = device.edges().iter().map(|e| (e.p, e.q)).collect();
        let device = Device::new(n, &edges, Some(profile)).unwrap();
        let mode = if i % 2 == 0 { Mode::Exact } else { Mode::Tb };
        let r = run::synthesize(&circuit, &device, mode, Objective::Fidelity, &SynthesisOptions::default()).unwrap();
        fid_cases.push((format!("random#{i}/{}", mode.name()), circuit, device, r));
    }
    let mut bad = Vec::new();
    for (label, circuit, device, r) in &fid_cases {
        let m = match metrics(circuit, device, r, 3) {
            Ok(m) => m,
            Err(e) => {
                bad.push(format!("{label}: {e}"));
                continue;
            }
        };
        let terms = circuit.num_qubits() + circuit.len() + 3 * r.swap_count;
        let drift = (1000.0 * m.fidelity.ln() - m.fidelity_scaled as f64).abs();
        if r.objective_value != Some(m.fidelity_scaled) || drift > 0.5 * terms as f64 {
            bad.push(format!("{label}: objective {:?} metric {} drift {drift:.2}", r.objective_value, m.fidelity_scaled));
        }
    }
    report.record(6, bad.is_empty(), format!("{}/{} fidelity results consistent {}", fid_cases.len() - bad.len(), fid_cases.len(), bad.join("; ")));

    let grid = olsq::load_device_file(&data("devices/grid4x4.json")).unwrap();
    let options = SynthesisOptions {
        swap_duration: 1,
        ..SynthesisOptions::default()
    };
    let mut rng = StdRng::seed_from_u64(7);
    let (mut dominated, mut strict, mut rows, mut failures) = (0, 0, Vec::new(), Vec::new());
    let (_, secs) = timed(|| {
        for i in 0..20 {
            let m = [8, 10, 12][i % 3];
            let edges = random_cubic(&mut rng, m);
            let commuting = phase_separation_from_graph(m, &edges).unwrap();
            let ordered = commuting.clone().prepare();
            let (_, tb) = synthesize_tb(&ordered, &grid, ObjectiveKind::Swap, &options, SatSolver::new()).unwrap();
            let q = synthesize_qaoa(&commuting, &grid, ObjectiveKind::Swap, &options, SatSolver::new()).unwrap().result;
            let tb_ok = check_result(&ordered, &grid, &tb, 1).unwrap().is_valid();
            let q_ok = check_result(&commuting, &grid, &q, 1).unwrap().is_valid();
            if !(tb_ok && q_ok) {
                failures.push(format!("#{i} invalid output"));
            }
            if q.depth_slots <= tb.depth_slots && q.swap_count <= tb.swap_count {
                dominated += 1;
            } else {
                failures.push(format!("#{i} M={m} qaoa d{} s{} vs tb d{} s{}", q.depth_slots, q.swap_count, tb.depth_slots, tb.swap_count));
            }
            if q.depth_slots < tb.depth_slots {
                strict += 1;
            }
            rows.push(format!("M={m} d{}/{} s{}/{}", q.depth_slots, tb.depth_slots, q.swap_count, tb.swap_count));
        }
    });
    report.record(
        7,
        failures.is_empty() && dominated == 20 && strict * 4 >= 20,
        format!("dominates on {dominated}/20, strictly shallower on {strict}/20 in {secs:.1}s [{}] {}", rows.join(", "), failures.join("; ")),
    );

    let failed: Vec<usize> = report.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", report.lines.len());
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
