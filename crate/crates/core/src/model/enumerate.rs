use alloc::format;
use alloc::vec;
use core::time::Duration;

use super::{Assignment, Model, Sense, Solver, Verdict};
use crate::error::SolverError;

/// Exhaustive search over every assignment, in lexicographic order of
/// handles. Only usable on tiny models; it exists as a reference point for
/// real backends.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationSolver {
    /// Refuse models with more candidate assignments than this.
    pub limit: u64,
}

impl Default for EnumerationSolver {
    fn default() -> Self {
        EnumerationSolver { limit: 1 << 22 }
    }
}

impl Solver for EnumerationSolver {
    fn solve(&mut self, model: &Model, _timeout: Option<Duration>) -> Result<Verdict, SolverError> {
        let mut space: u64 = 1;
        for decl in model.int_decls() {
            let width = (decl.hi - decl.lo + 1) as u64;
            space = space.saturating_mul(width);
        }
        space = space.saturating_mul(1u64.checked_shl(model.num_bools() as u32).unwrap_or(u64::MAX));
        if space > self.limit {
            return Err(SolverError(format!(
                "enumeration space {space} exceeds limit {}",
                self.limit
            )));
        }

        let mut current = Assignment {
            ints: model.int_decls().iter().map(|d| d.lo).collect(),
            bools: vec![false; model.num_bools()],
        };
        let mut best: Option<(Assignment, i64)> = None;
        loop {
            if model.check(&current).is_ok() {
                match model.objective() {
                    None => return Ok(Verdict::satisfiable(model, current)),
                    Some(obj) => {
                        let value = current.eval_linear(&obj.expr);
                        let better = match &best {
                            None => true,
                            Some((_, b)) => match obj.sense {
                                Sense::Minimize => value < *b,
                                Sense::Maximize => value > *b,
                            },
                        };
                        if better {
                            best = Some((current.clone(), value));
                        }
                    }
                }
            }
            if !advance(model, &mut current) {
                break;
            }
        }
        Ok(match best {
            Some((assignment, _)) => Verdict::satisfiable(model, assignment),
            None => Verdict::unsatisfiable(),
        })
    }
}

fn advance(model: &Model, a: &mut Assignment) -> bool {
    for b in a.bools.iter_mut() {
        if !*b {
            *b = true;
            return true;
        }
        *b = false;
    }
    for (v, decl) in a.ints.iter_mut().zip(model.int_decls()) {
        if *v < decl.hi {
            *v += 1;
            return true;
        }
        *v = decl.lo;
    }
    false
}
