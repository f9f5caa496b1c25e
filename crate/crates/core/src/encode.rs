//! The exact spacetime model and the T-growth synthesis loop.

use alloc::format;
use alloc::vec::Vec;
use core::time::Duration;

use crate::circuit::{Circuit, GateKind, Operands};
use crate::device::Device;
use crate::error::SynthesisError;
use crate::model::{Assignment, BoolVar, Formula, IntVar, LinearExpr, Model, Sense, Solver, Status, Term};
use crate::result::{GatePlacement, SwapPlacement, SynthesisResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    Depth,
    Swap,
    Fidelity,
}

/// How the dependency list constrains gate times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DependencyRule {
    /// `t_l < t_l'` for every dependency.
    Strict,
    /// `t_l <= t_l'`: dependent gates may share a block.
    Relaxed,
    /// No ordering at all.
    Dropped,
}

/// Parameters of one model instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingConfig {
    pub time_bound: usize,
    pub swap_duration: usize,
    pub objective: ObjectiveKind,
    pub dependencies: DependencyRule,
    /// Keep gates off the qubits of in-flight SWAPs.
    pub gate_swap_exclusion: bool,
    /// Forbid colliding gates that are not ordered by a dependency from
    /// sharing a time slot.
    pub separate_collisions: bool,
    /// Restrict the initial mapping to one representative per device
    /// symmetry class. Objective values are unaffected.
    pub break_symmetry: bool,
}

impl EncodingConfig {
    pub fn exact(time_bound: usize, swap_duration: usize, objective: ObjectiveKind) -> Self {
        EncodingConfig {
            time_bound,
            swap_duration,
            objective,
            dependencies: DependencyRule::Strict,
            gate_swap_exclusion: true,
            separate_collisions: true,
            break_symmetry: true,
        }
    }

    /// Block-level model: unit SWAPs between blocks, dependent gates may share
    /// a block and gates never wait on SWAPs.
    pub fn coarse(time_bound: usize, objective: ObjectiveKind) -> Self {
        EncodingConfig {
            time_bound,
            swap_duration: 1,
            objective,
            dependencies: DependencyRule::Relaxed,
            gate_swap_exclusion: false,
            separate_collisions: false,
            break_symmetry: true,
        }
    }
}

/// Knobs of the synthesis loops.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisOptions {
    pub swap_duration: usize,
    /// Relative T growth per unsatisfiable step.
    pub growth: f64,
    pub max_time_bound: usize,
    /// Starting bound; the longest dependency chain when unset.
    pub initial_time_bound: Option<usize>,
    /// Extra growth steps after the first satisfiable bound. The best result
    /// over all tried bounds wins, earlier bounds on ties.
    pub extra_steps: usize,
    /// Wall-clock budget handed to each solver call.
    pub timeout: Option<Duration>,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            swap_duration: 3,
            growth: 0.3,
            max_time_bound: 128,
            initial_time_bound: None,
            extra_steps: 0,
            timeout: None,
        }
    }
}

impl SynthesisOptions {
    pub fn validate(&self) -> Result<(), SynthesisError> {
        if self.swap_duration == 0 {
            return Err(SynthesisError::Config("swap duration must be at least 1"));
        }
        if !(self.growth > 0.0) {
            return Err(SynthesisError::Config("T growth factor must be positive"));
        }
        if self.max_time_bound == 0 {
            return Err(SynthesisError::Config("time bound cap must be at least 1"));
        }
        if self.initial_time_bound == Some(0) {
            return Err(SynthesisError::Config("initial time bound must be at least 1"));
        }
        Ok(())
    }
}

/// Next bound after `t`: `ceil(t * (1 + growth))`, at least `t + 1`.
pub fn grow_time_bound(t: usize, growth: f64) -> usize {
    let scaled = libm::ceil(t as f64 * (1.0 + growth) - 1e-9) as usize;
    scaled.max(t + 1)
}

/// Handles of the spacetime variables.
#[derive(Debug, Clone)]
pub struct VariableSet {
    /// `pi[q][t]`: physical qubit of logical `q` at slot `t`.
    pub pi: Vec<Vec<IntVar>>,
    pub time: Vec<IntVar>,
    /// Node index for single-qubit gates, edge index for two-qubit gates.
    pub space: Vec<IntVar>,
    /// `sigma[k][t]`: a SWAP on edge `k` finishes at slot `t`.
    pub sigma: Vec<Vec<BoolVar>>,
    pub depth: Option<IntVar>,
}

impl VariableSet {
    pub fn all_sigma(&self) -> impl Iterator<Item = BoolVar> + '_ {
        self.sigma.iter().flatten().copied()
    }
}

#[derive(Debug, Clone)]
pub struct Encoding {
    pub model: Model,
    pub vars: VariableSet,
    pub config: EncodingConfig,
}

pub(crate) fn check_instance(circuit: &Circuit, device: &Device) -> Result<(), SynthesisError> {
    if circuit.num_qubits() > device.num_nodes() {
        return Err(SynthesisError::TooManyQubits {
            logical: circuit.num_qubits(),
            physical: device.num_nodes(),
        });
    }
    if circuit.num_two_qubit() > 0 && device.num_edges() == 0 {
        return Err(SynthesisError::NoEdges);
    }
    Ok(())
}

/// Builds the constraint model for one time bound, objective included.
pub fn encode(
    circuit: &Circuit,
    device: &Device,
    config: &EncodingConfig,
) -> Result<Encoding, SynthesisError> {
    check_instance(circuit, device)?;
    if config.time_bound == 0 || config.swap_duration == 0 {
        return Err(SynthesisError::Config("T and S must be at least 1"));
    }
    let t_max = config.time_bound;
    let s = config.swap_duration;
    let n = device.num_nodes() as i64;
    let k_count = device.num_edges();
    let mut model = Model::new();

    let mut pi = Vec::with_capacity(circuit.num_qubits());
    for q in 0..circuit.num_qubits() {
        let row = (0..t_max)
            .map(|t| model.new_int(format!("pi_{q}_{t}"), 0, n - 1))
            .collect::<Result<Vec<_>, _>>()?;
        pi.push(row);
    }
    let mut time = Vec::with_capacity(circuit.len());
    for l in 0..circuit.len() {
        time.push(model.new_int(format!("time_{l}"), 0, t_max as i64 - 1)?);
    }
    let mut space = Vec::with_capacity(circuit.len());
    for (l, gate) in circuit.gates().iter().enumerate() {
        let hi = match gate.kind() {
            GateKind::Single => n - 1,
            GateKind::Two => k_count as i64 - 1,
        };
        space.push(model.new_int(format!("space_{l}"), 0, hi)?);
    }
    let sigma: Vec<Vec<BoolVar>> = (0..k_count)
        .map(|k| (0..t_max).map(|t| model.new_bool(format!("sigma_{k}_{t}"))).collect())
        .collect();

    // injective mapping
    for t in 0..t_max {
        for a in 0..pi.len() {
            for b in a + 1..pi.len() {
                model.assert(pi[a][t].ne_var(pi[b][t]))?;
            }
        }
    }

    match config.dependencies {
        DependencyRule::Strict => {
            for &(a, b) in circuit.dependencies() {
                model.assert(time[a].lt_var(time[b]))?;
            }
        }
        DependencyRule::Relaxed => {
            for &(a, b) in circuit.dependencies() {
                model.assert(time[a].le_var(time[b]))?;
            }
        }
        DependencyRule::Dropped => {}
    }
    if config.separate_collisions {
        let deps = circuit.dependencies();
        let ordered = config.dependencies == DependencyRule::Strict;
        for &(a, b) in circuit.collisions() {
            if !(ordered && deps.binary_search(&(a, b)).is_ok()) {
                model.assert(time[a].ne_var(time[b]))?;
            }
        }
    }

    // gates sit where their operands are
    for (l, gate) in circuit.gates().iter().enumerate() {
        for t in 0..t_max {
            let at_t = time[l].eq(t as i64);
            match gate.operands {
                Operands::Single(q) => {
                    model.assert(Formula::implies(at_t, pi[q][t].eq_var(space[l])))?;
                }
                Operands::Two(a, b) => {
                    for p in 0..device.num_nodes() {
                        let near = device
                            .incident_edges(p)
                            .expect("node in range")
                            .iter()
                            .map(|&k| pi[b][t].eq(device.edge(k).other(p).expect("incident edge") as i64));
                        model.assert(Formula::implies(at_t.clone() & pi[a][t].eq(p as i64), Formula::or(near)))?;
                    }
                    for (k, e) in device.edges().iter().enumerate() {
                        let (p, p2) = (e.p as i64, e.q as i64);
                        let placed = pi[a][t].eq(p) & pi[b][t].eq(p2) | pi[a][t].eq(p2) & pi[b][t].eq(p);
                        model.assert(Formula::implies(
                            at_t.clone() & space[l].eq(k as i64),
                            placed,
                        ))?;
                    }
                }
            }
        }
    }

    // SWAP timing
    for row in &sigma {
        for &sw in row.iter().take(s - 1) {
            model.assert(sw.is_false())?;
        }
    }
    for row in &sigma {
        for t in s - 1..t_max {
            for t2 in (t + 1 - s)..t {
                model.assert(!(row[t].is_true() & row[t2].is_true()))?;
            }
        }
    }
    for &(k, k2) in device.overlapping_pairs() {
        for t in s - 1..t_max {
            for t2 in (t + 1 - s)..=t {
                model.assert(!(sigma[k][t].is_true() & sigma[k2][t2].is_true()))?;
                if t2 < t {
                    model.assert(!(sigma[k2][t].is_true() & sigma[k][t2].is_true()))?;
                }
            }
        }
    }

    if config.gate_swap_exclusion {
        for (k, e) in device.edges().iter().enumerate() {
            let blocked: Vec<usize> = core::iter::once(k).chain(device.overlapping_with(k)).collect();
            for t in s - 1..t_max {
                let lo = (t + 1 - s) as i64;
                for (l, gate) in circuit.gates().iter().enumerate() {
                    let in_window = sigma[k][t].is_true() & time[l].ge(lo) & time[l].le(t as i64);
                    let away = match gate.kind() {
                        GateKind::Single => space[l].ne(e.p as i64) & space[l].ne(e.q as i64),
                        GateKind::Two => Formula::and(blocked.iter().map(|&b| space[l].ne(b as i64))),
                    };
                    model.assert(Formula::implies(in_window, away))?;
                }
            }
        }
    }

    // mapping transformation
    for t in 0..t_max.saturating_sub(1) {
        for p in 0..device.num_nodes() {
            let incident = device.incident_edges(p).expect("node in range");
            for row in &pi {
                let idle = Formula::and(
                    core::iter::once(row[t].eq(p as i64))
                        .chain(incident.iter().map(|&k| sigma[k][t].is_false())),
                );
                model.assert(Formula::implies(idle, row[t + 1].eq(p as i64)))?;
            }
        }
        for p in 0..device.num_nodes() {
            let incident = device.incident_edges(p).expect("node in range");
            for row in &pi {
                let reach = core::iter::once(row[t + 1].eq(p as i64))
                    .chain(incident.iter().map(|&k| row[t + 1].eq(device.edge(k).other(p).unwrap() as i64)));
                model.assert(Formula::implies(row[t].eq(p as i64), Formula::or(reach)))?;
            }
        }
        for (k, e) in device.edges().iter().enumerate() {
            for row in &pi {
                for (from, to) in [(e.p, e.q), (e.q, e.p)] {
                    model.assert(Formula::implies(
                        sigma[k][t].is_true() & row[t].eq(from as i64),
                        row[t + 1].eq(to as i64),
                    ))?;
                }
            }
        }
    }

    if config.break_symmetry {
        if let Some(group) = device.automorphisms(SYMMETRY_LIMIT) {
            let first: Vec<IntVar> = pi.iter().map(|row| row[0]).collect();
            break_symmetry(&mut model, &first, &group, Vec::new())?;
        }
    }

    let mut vars = VariableSet {
        pi,
        time,
        space,
        sigma,
        depth: None,
    };
    match config.objective {
        ObjectiveKind::Depth => objective_depth(&mut model, &mut vars, t_max)?,
        ObjectiveKind::Swap => objective_swap(&mut model, &vars)?,
        ObjectiveKind::Fidelity => objective_fidelity(&mut model, &vars, circuit, device)?,
    }
    Ok(Encoding {
        model,
        vars,
        config: *config,
    })
}

const SYMMETRY_LIMIT: usize = 2048;

/// Walks the stabilizer chain of `group` along the qubits: qubit `q` starts on
/// the smallest node of its orbit under the automorphisms fixing the nodes
/// chosen for the earlier qubits. Any layout maps onto one that satisfies this.
fn break_symmetry(
    model: &mut Model,
    initial: &[IntVar],
    group: &[Vec<usize>],
    guard: Vec<Formula>,
) -> Result<(), SynthesisError> {
    let Some((&x, rest)) = initial.split_first() else {
        return Ok(());
    };
    if group.len() <= 1 {
        return Ok(());
    }
    let n = group[0].len();
    let reps: Vec<usize> = (0..n).filter(|&p| group.iter().all(|g| g[p] >= p)).collect();
    if reps.len() < n {
        let allowed = Formula::or(reps.iter().map(|&r| x.eq(r as i64)));
        model.assert(Formula::implies(Formula::and(guard.clone()), allowed))?;
    }
    for r in reps {
        let stab: Vec<Vec<usize>> = group.iter().filter(|g| g[r] == r).cloned().collect();
        if stab.len() > 1 {
            let mut g = guard.clone();
            g.push(x.eq(r as i64));
            break_symmetry(model, rest, &stab, g)?;
        }
    }
    Ok(())
}

/// Minimize an auxiliary bound on every gate time. Its value is the last
/// occupied slot index, one less than the depth in slots.
pub fn objective_depth(
    model: &mut Model,
    vars: &mut VariableSet,
    time_bound: usize,
) -> Result<(), SynthesisError> {
    let depth = model.new_int("depth", 0, time_bound as i64 - 1)?;
    for &t in &vars.time {
        model.assert(depth.ge_var(t))?;
    }
    model.set_objective(Sense::Minimize, LinearExpr::new().with(1, Term::Int(depth)))?;
    vars.depth = Some(depth);
    Ok(())
}

pub fn objective_swap(model: &mut Model, vars: &VariableSet) -> Result<(), SynthesisError> {
    model.set_objective(Sense::Minimize, LinearExpr::sum_of_bools(vars.all_sigma()))?;
    Ok(())
}

/// Maximize the scaled log success rate: measurement at the final mapping,
/// input gates at their locations and three two-qubit gates per SWAP.
pub fn objective_fidelity(
    model: &mut Model,
    vars: &VariableSet,
    circuit: &Circuit,
    device: &Device,
) -> Result<(), SynthesisError> {
    let mut expr = LinearExpr::new();
    for row in &vars.pi {
        if let Some(&last) = row.last() {
            for p in 0..device.num_nodes() {
                expr.add(device.scaled_measure(p), Term::IntEq(last, p as i64));
            }
        }
    }
    for (gate, &x) in circuit.gates().iter().zip(&vars.space) {
        match gate.kind() {
            GateKind::Single => {
                for p in 0..device.num_nodes() {
                    expr.add(device.scaled_single(p), Term::IntEq(x, p as i64));
                }
            }
            GateKind::Two => {
                for k in 0..device.num_edges() {
                    expr.add(device.scaled_two(k), Term::IntEq(x, k as i64));
                }
            }
        }
    }
    for (k, row) in vars.sigma.iter().enumerate() {
        for &sw in row {
            expr.add(device.swap_log_fidelity(k), Term::Bool(sw));
        }
    }
    model.set_objective(Sense::Maximize, expr)?;
    Ok(())
}

/// Reads a satisfying assignment back into a result. SWAPs finishing after
/// the last gate are dropped and the trajectory stops at the last gate slot.
pub fn decode(
    circuit: &Circuit,
    device: &Device,
    encoding: &Encoding,
    assignment: &Assignment,
    objective_value: Option<i64>,
) -> SynthesisResult {
    let vars = &encoding.vars;
    let gates: Vec<GatePlacement> = vars
        .time
        .iter()
        .zip(&vars.space)
        .map(|(&t, &x)| GatePlacement {
            time: assignment.int(t) as usize,
            location: assignment.int(x) as usize,
        })
        .collect();
    let last = gates.iter().map(|g| g.time).max();
    let mut swaps = Vec::new();
    if let Some(last) = last {
        for (k, row) in vars.sigma.iter().enumerate() {
            for (t, &sw) in row.iter().enumerate().take(last + 1) {
                if assignment.bool(sw) {
                    swaps.push(SwapPlacement {
                        edge: k,
                        finish_time: t,
                    });
                }
            }
        }
    }
    let rows = last.map_or(1, |l| l + 1);
    let trajectory = (0..rows)
        .map(|t| vars.pi.iter().map(|row| assignment.int(row[t]) as usize).collect())
        .collect();
    SynthesisResult::assemble(
        circuit,
        device,
        encoding.config.time_bound,
        gates,
        swaps,
        trajectory,
        objective_value,
    )
}

pub(crate) fn better(kind: ObjectiveKind, candidate: Option<i64>, incumbent: Option<i64>) -> bool {
    match (candidate, incumbent) {
        (Some(c), Some(i)) => match kind {
            ObjectiveKind::Fidelity => c > i,
            ObjectiveKind::Depth | ObjectiveKind::Swap => c < i,
        },
        (Some(_), None) => true,
        _ => false,
    }
}

/// Solves one prepared model and classifies the verdict.
pub(crate) fn solve_once<S: Solver>(
    solver: &mut S,
    model: &Model,
    timeout: Option<Duration>,
    time_bound: usize,
) -> Result<Option<(Assignment, Option<i64>)>, SynthesisError> {
    let verdict = solver.solve(model, timeout)?;
    match verdict.status {
        Status::Satisfiable => {
            let assignment = verdict
                .assignment
                .ok_or_else(|| SynthesisError::Internal(format!("satisfiable verdict without assignment at T={time_bound}")))?;
            if let Err(failure) = model.check(&assignment) {
                return Err(SynthesisError::Internal(format!(
                    "solver assignment fails the model at T={time_bound}: {failure:?}"
                )));
            }
            let value = model.objective_value(&assignment);
            Ok(Some((assignment, value)))
        }
        Status::Unsatisfiable => Ok(None),
        Status::Timeout => Err(SynthesisError::Timeout { time_bound }),
    }
}

/// Exact synthesis: grows T from the longest dependency chain until the
/// model is satisfiable, then returns the optimum at that bound.
pub fn synthesize<S: Solver>(
    circuit: &Circuit,
    device: &Device,
    objective: ObjectiveKind,
    options: &SynthesisOptions,
    mut solver: S,
) -> Result<SynthesisResult, SynthesisError> {
    options.validate()?;
    check_instance(circuit, device)?;
    let mut t = options
        .initial_time_bound
        .unwrap_or_else(|| circuit.longest_chain().max(1));
    let mut best: Option<SynthesisResult> = None;
    let mut extra_left = options.extra_steps;
    loop {
        if t > options.max_time_bound {
            return match best {
                Some(result) => Ok(result),
                None => Err(SynthesisError::TimeBoundExhausted {
                    cap: options.max_time_bound,
                }),
            };
        }
        let config = EncodingConfig::exact(t, options.swap_duration, objective);
        let encoding = encode(circuit, device, &config)?;
        if let Some((assignment, value)) = solve_once(&mut solver, &encoding.model, options.timeout, t)? {
            let result = decode(circuit, device, &encoding, &assignment, value);
            let incumbent = best.as_ref().and_then(|b| b.objective_value);
            if best.is_none() || better(objective, value, incumbent) {
                best = Some(result);
            }
            if extra_left == 0 {
                return Ok(best.expect("set above"));
            }
            extra_left -= 1;
        } else if best.is_some() {
            // an extra step cannot be less satisfiable than its predecessor
            return Err(SynthesisError::Internal(format!("bound {t} unsatisfiable after a satisfiable one")));
        }
        t = grow_time_bound(t, options.growth);
    }
}
