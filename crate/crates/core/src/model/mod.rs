//! Declarative constraint models: bounded integers, booleans, logical
//! connectives, linear sums and one optional linear objective.
//!
//! A [`Model`] is only a description; a [`Solver`] implementation decides how
//! to search it. The model keeps enough information to re-check any
//! assignment on its own ([`Model::check`]), which is how verdicts are
//! validated independently of the engine that produced them.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU32, Ordering};
use core::time::Duration;

use crate::error::{ModelError, SolverError};

mod enumerate;
mod eval;
mod smtlib;

pub use enumerate::EnumerationSolver;

static NEXT_MODEL_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVar {
    model: u32,
    index: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoolVar {
    model: u32,
    index: u32,
}

impl IntVar {
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn eq(self, value: i64) -> Formula {
        Formula::IntConst(self, Cmp::Eq, value)
    }

    pub fn ne(self, value: i64) -> Formula {
        Formula::IntConst(self, Cmp::Ne, value)
    }

    pub fn le(self, value: i64) -> Formula {
        Formula::IntConst(self, Cmp::Le, value)
    }

    pub fn ge(self, value: i64) -> Formula {
        Formula::IntConst(self, Cmp::Ge, value)
    }

    pub fn lt(self, value: i64) -> Formula {
        Formula::IntConst(self, Cmp::Lt, value)
    }

    pub fn gt(self, value: i64) -> Formula {
        Formula::IntConst(self, Cmp::Gt, value)
    }

    pub fn eq_var(self, other: IntVar) -> Formula {
        Formula::IntVars(self, Cmp::Eq, other)
    }

    pub fn ne_var(self, other: IntVar) -> Formula {
        Formula::IntVars(self, Cmp::Ne, other)
    }

    pub fn lt_var(self, other: IntVar) -> Formula {
        Formula::IntVars(self, Cmp::Lt, other)
    }

    pub fn le_var(self, other: IntVar) -> Formula {
        Formula::IntVars(self, Cmp::Le, other)
    }

    pub fn ge_var(self, other: IntVar) -> Formula {
        Formula::IntVars(self, Cmp::Ge, other)
    }
}

impl BoolVar {
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_true(self) -> Formula {
        Formula::Bool(self)
    }

    pub fn is_false(self) -> Formula {
        Formula::Not(Box::new(Formula::Bool(self)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Cmp::Eq => lhs == rhs,
            Cmp::Ne => lhs != rhs,
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Ge => lhs >= rhs,
        }
    }
}

/// One summand of a linear expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    /// 1 when the boolean holds, else 0.
    Bool(BoolVar),
    /// The integer's value.
    Int(IntVar),
    /// 1 when the integer equals the constant, else 0.
    IntEq(IntVar, i64),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearExpr {
    pub terms: Vec<(i64, Term)>,
    pub constant: i64,
}

impl LinearExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, coeff: i64, term: Term) -> &mut Self {
        if coeff != 0 {
            self.terms.push((coeff, term));
        }
        self
    }

    pub fn with(mut self, coeff: i64, term: Term) -> Self {
        self.add(coeff, term);
        self
    }

    pub fn sum_of_bools(vars: impl IntoIterator<Item = BoolVar>) -> Self {
        LinearExpr {
            terms: vars.into_iter().map(|b| (1, Term::Bool(b))).collect(),
            constant: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    Bool(BoolVar),
    IntConst(IntVar, Cmp, i64),
    IntVars(IntVar, Cmp, IntVar),
    Linear(LinearExpr, Cmp, i64),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::And(parts.into_iter().collect())
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::Or(parts.into_iter().collect())
    }

    pub fn implies(premise: Formula, conclusion: Formula) -> Formula {
        Formula::Implies(Box::new(premise), Box::new(conclusion))
    }

    pub fn linear(expr: LinearExpr, cmp: Cmp, rhs: i64) -> Formula {
        Formula::Linear(expr, cmp, rhs)
    }
}

impl core::ops::Not for Formula {
    type Output = Formula;

    fn not(self) -> Formula {
        match self {
            Formula::Not(inner) => *inner,
            Formula::Const(b) => Formula::Const(!b),
            other => Formula::Not(Box::new(other)),
        }
    }
}

impl core::ops::BitAnd for Formula {
    type Output = Formula;

    fn bitand(self, rhs: Formula) -> Formula {
        match self {
            Formula::And(mut parts) => {
                parts.push(rhs);
                Formula::And(parts)
            }
            lhs => Formula::And(alloc::vec![lhs, rhs]),
        }
    }
}

impl core::ops::BitOr for Formula {
    type Output = Formula;

    fn bitor(self, rhs: Formula) -> Formula {
        match self {
            Formula::Or(mut parts) => {
                parts.push(rhs);
                Formula::Or(parts)
            }
            lhs => Formula::Or(alloc::vec![lhs, rhs]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub expr: LinearExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

/// A constraint model. Handles are numbered in creation order, so building
/// the same model twice yields identical numbering.
#[derive(Debug, Clone)]
pub struct Model {
    id: u32,
    ints: Vec<IntDecl>,
    bools: Vec<String>,
    assertions: Vec<Formula>,
    objective: Option<Objective>,
}

impl Default for Model {
    fn default() -> Self {
        Self::new()
    }
}

impl Model {
    pub fn new() -> Self {
        Model {
            id: NEXT_MODEL_ID.fetch_add(1, Ordering::Relaxed),
            ints: Vec::new(),
            bools: Vec::new(),
            assertions: Vec::new(),
            objective: None,
        }
    }

    pub fn new_int(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> Result<IntVar, ModelError> {
        if lo > hi {
            return Err(ModelError::EmptyDomain { lo, hi });
        }
        let index = self.ints.len() as u32;
        self.ints.push(IntDecl {
            name: name.into(),
            lo,
            hi,
        });
        Ok(IntVar {
            model: self.id,
            index,
        })
    }

    pub fn new_bool(&mut self, name: impl Into<String>) -> BoolVar {
        let index = self.bools.len() as u32;
        self.bools.push(name.into());
        BoolVar {
            model: self.id,
            index,
        }
    }

    pub fn assert(&mut self, formula: Formula) -> Result<(), ModelError> {
        self.validate_formula(&formula)?;
        self.assertions.push(formula);
        Ok(())
    }

    pub fn set_objective(&mut self, sense: Sense, expr: LinearExpr) -> Result<(), ModelError> {
        self.validate_linear(&expr)?;
        self.objective = Some(Objective { sense, expr });
        Ok(())
    }

    pub fn clear_objective(&mut self) {
        self.objective = None;
    }

    pub fn num_ints(&self) -> usize {
        self.ints.len()
    }

    pub fn num_bools(&self) -> usize {
        self.bools.len()
    }

    /// Number of declared handles of either kind.
    pub fn variable_count(&self) -> usize {
        self.ints.len() + self.bools.len()
    }

    pub fn int_decl(&self, var: IntVar) -> &IntDecl {
        &self.ints[var.index()]
    }

    pub fn int_decls(&self) -> &[IntDecl] {
        &self.ints
    }

    pub fn bool_name(&self, var: BoolVar) -> &str {
        &self.bools[var.index()]
    }

    pub fn bool_names(&self) -> &[String] {
        &self.bools
    }

    /// Reconstructs the handle of the `index`-th integer variable.
    pub fn int_handle(&self, index: usize) -> IntVar {
        assert!(index < self.ints.len());
        IntVar {
            model: self.id,
            index: index as u32,
        }
    }

    pub fn bool_handle(&self, index: usize) -> BoolVar {
        assert!(index < self.bools.len());
        BoolVar {
            model: self.id,
            index: index as u32,
        }
    }

    pub fn assertions(&self) -> &[Formula] {
        &self.assertions
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    /// Re-evaluates every assertion (and every domain) on `assignment`.
    /// Returns the index of the first violated assertion.
    pub fn check(&self, assignment: &Assignment) -> Result<(), CheckFailure> {
        if assignment.ints.len() != self.ints.len() || assignment.bools.len() != self.bools.len() {
            return Err(CheckFailure::Shape);
        }
        for (i, (decl, &v)) in self.ints.iter().zip(&assignment.ints).enumerate() {
            if v < decl.lo || v > decl.hi {
                return Err(CheckFailure::Domain(i));
            }
        }
        for (i, f) in self.assertions.iter().enumerate() {
            if !eval::formula(f, assignment) {
                return Err(CheckFailure::Assertion(i));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, assignment: &Assignment) -> Option<i64> {
        self.objective
            .as_ref()
            .map(|o| eval::linear(&o.expr, assignment))
    }

    pub fn to_smtlib(&self) -> String {
        smtlib::render(self)
    }

    fn validate_int(&self, var: IntVar) -> Result<(), ModelError> {
        if var.model != self.id || var.index() >= self.ints.len() {
            return Err(ModelError::UnknownHandle(format!("int #{}", var.index)));
        }
        Ok(())
    }

    fn validate_bool(&self, var: BoolVar) -> Result<(), ModelError> {
        if var.model != self.id || var.index() >= self.bools.len() {
            return Err(ModelError::UnknownHandle(format!("bool #{}", var.index)));
        }
        Ok(())
    }

    fn validate_linear(&self, expr: &LinearExpr) -> Result<(), ModelError> {
        for (_, term) in &expr.terms {
            match *term {
                Term::Bool(b) => self.validate_bool(b)?,
                Term::Int(x) | Term::IntEq(x, _) => self.validate_int(x)?,
            }
        }
        Ok(())
    }

    fn validate_formula(&self, f: &Formula) -> Result<(), ModelError> {
        match f {
            Formula::Const(_) => Ok(()),
            Formula::Bool(b) => self.validate_bool(*b),
            Formula::IntConst(x, _, _) => self.validate_int(*x),
            Formula::IntVars(x, _, y) => {
                self.validate_int(*x)?;
                self.validate_int(*y)
            }
            Formula::Linear(expr, _, _) => self.validate_linear(expr),
            Formula::Not(inner) => self.validate_formula(inner),
            Formula::And(parts) | Formula::Or(parts) => {
                parts.iter().try_for_each(|p| self.validate_formula(p))
            }
            Formula::Implies(a, b) => {
                self.validate_formula(a)?;
                self.validate_formula(b)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckFailure {
    Shape,
    Domain(usize),
    Assertion(usize),
}

/// A total assignment of values to a model's handles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub ints: Vec<i64>,
    pub bools: Vec<bool>,
}

impl Assignment {
    pub fn int(&self, var: IntVar) -> i64 {
        self.ints[var.index()]
    }

    pub fn bool(&self, var: BoolVar) -> bool {
        self.bools[var.index()]
    }

    pub fn eval(&self, formula: &Formula) -> bool {
        eval::formula(formula, self)
    }

    pub fn eval_linear(&self, expr: &LinearExpr) -> i64 {
        eval::linear(expr, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Satisfiable,
    Unsatisfiable,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub assignment: Option<Assignment>,
    pub objective_value: Option<i64>,
}

impl Verdict {
    pub fn satisfiable(model: &Model, assignment: Assignment) -> Self {
        Verdict {
            status: Status::Satisfiable,
            objective_value: model.objective_value(&assignment),
            assignment: Some(assignment),
        }
    }

    pub fn unsatisfiable() -> Self {
        Verdict {
            status: Status::Unsatisfiable,
            assignment: None,
            objective_value: None,
        }
    }

    pub fn timeout() -> Self {
        Verdict {
            status: Status::Timeout,
            assignment: None,
            objective_value: None,
        }
    }
}

/// An exact optimizing solver. When the model has an objective, a
/// satisfiable verdict must carry a provably optimal assignment.
pub trait Solver {
    fn solve(&mut self, model: &Model, timeout: Option<Duration>) -> Result<Verdict, SolverError>;
}

impl<S: Solver + ?Sized> Solver for &mut S {
    fn solve(&mut self, model: &Model, timeout: Option<Duration>) -> Result<Verdict, SolverError> {
        (**self).solve(model, timeout)
    }
}
