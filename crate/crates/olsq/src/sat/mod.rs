//! A [`Solver`] backed by CaDiCaL.
//!
//! Models are compiled to CNF once; optimization is a binary search on the
//! objective through assumption literals, so learned clauses carry over
//! between probes.

mod cnf;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use cadical::Callbacks;
use olsq_core::error::SolverError;
use olsq_core::model::{Assignment, Model, Sense, Solver, Term, Verdict};

use cnf::{ClauseSink, Compiler, WeightedSum, TRUE};
pub use cnf::{FALSE as FALSE_LIT, TRUE as TRUE_LIT};

struct Deadline(Option<Instant>);

impl Callbacks for Deadline {
    fn terminate(&mut self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

struct Engine(cadical::Solver<Deadline>);

impl ClauseSink for Engine {
    fn add_clause(&mut self, clause: &[i32]) {
        self.0.add_clause(clause.iter().copied());
    }
}

/// Size and effort of the most recent solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub variables: i32,
    pub clauses: usize,
    pub sat_calls: usize,
}

#[derive(Debug, Default)]
pub struct SatSolver {
    pub last: SolveStats,
}

impl SatSolver {
    pub fn new() -> Self {
        Self::default()
    }
}

enum Bound {
    /// A single order-encoded integer scaled by a positive coefficient.
    Int { index: usize, coeff: i64, constant: i64 },
    Unit { sum: WeightedSum, outputs: Option<Vec<i32>> },
    Weighted { sum: WeightedSum, bits: Option<Vec<i32>> },
}

struct Run<'m> {
    model: &'m Model,
    engine: Engine,
    compiler: Compiler,
    stats: SolveStats,
}

impl Run<'_> {
    fn call(&mut self, assumptions: &[i32]) -> Option<bool> {
        self.stats.sat_calls += 1;
        self.engine.0.solve_with(assumptions.iter().copied())
    }

    fn assignment(&self) -> Assignment {
        let value = |l: i32| l == TRUE || self.engine.0.value(l) == Some(true);
        Assignment {
            ints: (0..self.model.num_ints())
                .map(|i| self.compiler.int_value(i, value))
                .collect(),
            bools: (0..self.model.num_bools())
                .map(|i| value(self.compiler.bool_lit(i)))
                .collect(),
        }
    }

    /// Literal that, when assumed, forces the minimized value to be at most `b`.
    fn bound_literal(&mut self, bound: &mut Bound, b: i64, upper: i64, cache: &mut HashMap<i64, i32>) -> i32 {
        match bound {
            Bound::Int { index, coeff, constant } => {
                // coeff * x + constant <= b
                let limit = (b - *constant).div_euclid(*coeff);
                let var = self.model.int_handle(*index);
                -self.compiler.ge(var, limit + 1)
            }
            Bound::Unit { sum, outputs } => {
                let out = outputs.get_or_insert_with(|| {
                    let lits: Vec<i32> = sum.terms.iter().map(|t| t.1).collect();
                    let cap = (upper - sum.constant).max(1) as usize;
                    self.compiler.totalizer(&mut self.engine, &lits, cap)
                });
                let k = b - sum.constant;
                if k < 0 {
                    return cnf::FALSE;
                }
                out.get(k as usize).map_or(TRUE, |&l| -l)
            }
            Bound::Weighted { sum, bits } => {
                if let Some(&a) = cache.get(&b) {
                    return a;
                }
                let bits = bits.get_or_insert_with(|| self.compiler.adder(&mut self.engine, &sum.terms));
                let bits = bits.clone();
                let a = self.compiler.fresh();
                self.compiler.le_const(&mut self.engine, &bits, b - sum.constant, &[-a]);
                cache.insert(b, a);
                a
            }
        }
    }
}

impl Solver for SatSolver {
    fn solve(&mut self, model: &Model, timeout: Option<Duration>) -> Result<Verdict, SolverError> {
        let deadline = timeout.map(|t| Instant::now() + t);
        let mut solver = cadical::Solver::<Deadline>::new();
        solver.set_callbacks(Some(Deadline(deadline)));
        let mut engine = Engine(solver);
        let mut compiler = Compiler::new(model, &mut engine);
        for f in model.assertions() {
            compiler.assert(&mut engine, f);
        }
        let mut run = Run {
            model,
            engine,
            compiler,
            stats: SolveStats::default(),
        };
        let verdict = optimize(&mut run);
        run.stats.variables = run.compiler.num_vars();
        run.stats.clauses = run.compiler.clauses;
        self.last = run.stats;
        verdict
    }
}

fn optimize(run: &mut Run<'_>) -> Result<Verdict, SolverError> {
    let model = run.model;
    match run.call(&[]) {
        None => return Ok(Verdict::timeout()),
        Some(false) => return Ok(Verdict::unsatisfiable()),
        Some(true) => {}
    }
    let mut best = run.assignment();
    let Some(objective) = model.objective() else {
        return Ok(Verdict::satisfiable(model, best));
    };
    // everything below minimizes sign * expr
    let sign = match objective.sense {
        Sense::Minimize => 1,
        Sense::Maximize => -1,
    };
    let mut expr = objective.expr.clone();
    for t in &mut expr.terms {
        t.0 *= sign;
    }
    expr.constant *= sign;
    let value_of = |a: &Assignment| a.eval_linear(&expr);

    let (mut bound, lower) = match expr.terms.as_slice() {
        [(c, Term::Int(x))] if *c > 0 => {
            let decl = model.int_decl(*x);
            (
                Bound::Int {
                    index: x.index(),
                    coeff: *c,
                    constant: expr.constant,
                },
                c * decl.lo + expr.constant,
            )
        }
        _ => {
            let sum = run.compiler.weighted(&mut run.engine, &expr);
            let lower = sum.constant;
            if sum.is_unit() {
                (Bound::Unit { sum, outputs: None }, lower)
            } else {
                (Bound::Weighted { sum, bits: None }, lower)
            }
        }
    };

    let mut hi = value_of(&best);
    let mut lo = lower;
    let upper = hi;
    let mut cache = HashMap::new();
    while lo < hi {
        // unit sums step down one at a time
        let mid = match bound {
            Bound::Unit { .. } => hi - 1,
            _ => lo + (hi - lo - 1) / 2,
        };
        let lit = run.bound_literal(&mut bound, mid, upper, &mut cache);
        match run.call(&[lit]) {
            None => return Ok(Verdict::timeout()),
            Some(true) => {
                let a = run.assignment();
                let v = value_of(&a);
                if v > mid {
                    return Err(SolverError(format!("objective bound {mid} assumed but model has value {v}")));
                }
                best = a;
                hi = v;
            }
            Some(false) => lo = mid + 1,
        }
    }
    Ok(Verdict::satisfiable(model, best))
}
