//! SMT-LIB 2 rendering of a model, for debugging dumps.

use alloc::format;
use alloc::string::String;
use core::fmt::Write;

use super::{Cmp, Formula, LinearExpr, Model, Sense, Term};

fn int_name(m: &Model, index: usize) -> String {
    symbol(&m.int_decls()[index].name, 'i', index)
}

fn bool_name(m: &Model, index: usize) -> String {
    symbol(&m.bool_names()[index], 'b', index)
}

fn symbol(name: &str, prefix: char, index: usize) -> String {
    if name.is_empty() {
        format!("{prefix}{index}")
    } else if name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        String::from(name)
    } else {
        format!("|{}|", name.replace('|', "_"))
    }
}

fn num(v: i64) -> String {
    if v < 0 {
        format!("(- {})", v.unsigned_abs())
    } else {
        format!("{v}")
    }
}

fn cmp_op(cmp: Cmp, lhs: &str, rhs: &str) -> String {
    match cmp {
        Cmp::Eq => format!("(= {lhs} {rhs})"),
        Cmp::Ne => format!("(distinct {lhs} {rhs})"),
        Cmp::Lt => format!("(< {lhs} {rhs})"),
        Cmp::Le => format!("(<= {lhs} {rhs})"),
        Cmp::Gt => format!("(> {lhs} {rhs})"),
        Cmp::Ge => format!("(>= {lhs} {rhs})"),
    }
}

fn term(m: &Model, t: &Term) -> String {
    match *t {
        Term::Bool(b) => format!("(ite {} 1 0)", bool_name(m, b.index())),
        Term::Int(x) => int_name(m, x.index()),
        Term::IntEq(x, v) => format!("(ite (= {} {}) 1 0)", int_name(m, x.index()), num(v)),
    }
}

fn linear(m: &Model, e: &LinearExpr) -> String {
    let mut out = String::from("(+");
    let _ = write!(out, " {}", num(e.constant));
    for (c, t) in &e.terms {
        let _ = write!(out, " (* {} {})", num(*c), term(m, t));
    }
    out.push(')');
    out
}

fn formula(m: &Model, f: &Formula) -> String {
    match f {
        Formula::Const(true) => String::from("true"),
        Formula::Const(false) => String::from("false"),
        Formula::Bool(b) => bool_name(m, b.index()),
        Formula::IntConst(x, cmp, v) => cmp_op(*cmp, &int_name(m, x.index()), &num(*v)),
        Formula::IntVars(x, cmp, y) => {
            cmp_op(*cmp, &int_name(m, x.index()), &int_name(m, y.index()))
        }
        Formula::Linear(e, cmp, rhs) => cmp_op(*cmp, &linear(m, e), &num(*rhs)),
        Formula::Not(inner) => format!("(not {})", formula(m, inner)),
        Formula::And(parts) if parts.is_empty() => String::from("true"),
        Formula::Or(parts) if parts.is_empty() => String::from("false"),
        Formula::And(parts) | Formula::Or(parts) => {
            let op = if matches!(f, Formula::And(_)) { "and" } else { "or" };
            let mut out = format!("({op}");
            for p in parts {
                let _ = write!(out, " {}", formula(m, p));
            }
            out.push(')');
            out
        }
        Formula::Implies(a, b) => format!("(=> {} {})", formula(m, a), formula(m, b)),
    }
}

pub(super) fn render(m: &Model) -> String {
    let mut out = String::new();
    for (i, decl) in m.int_decls().iter().enumerate() {
        let name = int_name(m, i);
        let _ = writeln!(out, "(declare-const {name} Int)");
        let _ = writeln!(out, "(assert (and (<= {} {name}) (<= {name} {})))", num(decl.lo), num(decl.hi));
    }
    for i in 0..m.num_bools() {
        let _ = writeln!(out, "(declare-const {} Bool)", bool_name(m, i));
    }
    for f in m.assertions() {
        let _ = writeln!(out, "(assert {})", formula(m, f));
    }
    if let Some(obj) = m.objective() {
        let op = match obj.sense {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        };
        let _ = writeln!(out, "({op} {})", linear(m, &obj.expr));
    }
    out.push_str("(check-sat)\n(get-model)\n");
    out
}
