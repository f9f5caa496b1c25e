use super::{Assignment, Formula, LinearExpr, Term};

pub(super) fn term(t: &Term, a: &Assignment) -> i64 {
    match *t {
        Term::Bool(b) => i64::from(a.bool(b)),
        Term::Int(x) => a.int(x),
        Term::IntEq(x, v) => i64::from(a.int(x) == v),
    }
}

pub(super) fn linear(expr: &LinearExpr, a: &Assignment) -> i64 {
    expr.constant + expr.terms.iter().map(|(c, t)| c * term(t, a)).sum::<i64>()
}

pub(super) fn formula(f: &Formula, a: &Assignment) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Bool(b) => a.bool(*b),
        Formula::IntConst(x, cmp, v) => cmp.holds(a.int(*x), *v),
        Formula::IntVars(x, cmp, y) => cmp.holds(a.int(*x), a.int(*y)),
        Formula::Linear(expr, cmp, rhs) => cmp.holds(linear(expr, a), *rhs),
        Formula::Not(inner) => !formula(inner, a),
        Formula::And(parts) => parts.iter().all(|p| formula(p, a)),
        Formula::Or(parts) => parts.iter().any(|p| formula(p, a)),
        Formula::Implies(p, q) => !formula(p, a) || formula(q, a),
    }
}
