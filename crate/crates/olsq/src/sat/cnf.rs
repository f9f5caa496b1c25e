//! Clause generation for models: order-encoded integers, negation normal
//! form with Tseitin literals, and adder networks for linear sums.

use std::collections::HashMap;

use olsq_core::model::{Cmp, Formula, IntVar, LinearExpr, Model, Term};

/// Literal of the constant-true variable.
pub const TRUE: i32 = 1;
pub const FALSE: i32 = -1;

/// Receives clauses; the first variable is reserved for [`TRUE`].
pub trait ClauseSink {
    fn add_clause(&mut self, clause: &[i32]);
}

impl ClauseSink for Vec<Vec<i32>> {
    fn add_clause(&mut self, clause: &[i32]) {
        self.push(clause.to_vec());
    }
}

#[derive(Debug, Clone)]
struct IntEnc {
    lo: i64,
    hi: i64,
    /// `ge[i]` holds iff the value is at least `lo + 1 + i`.
    ge: Vec<i32>,
}

/// Negation normal form over model atoms.
#[derive(Debug, Clone)]
enum Nnf<'a> {
    Const(bool),
    Lit(i32),
    IntConst(IntVar, Cmp, i64),
    IntVars(IntVar, Cmp, IntVar),
    Linear(&'a LinearExpr, Cmp, i64),
    And(Vec<Nnf<'a>>),
    Or(Vec<Nnf<'a>>),
}

fn negate(cmp: Cmp) -> Cmp {
    match cmp {
        Cmp::Eq => Cmp::Ne,
        Cmp::Ne => Cmp::Eq,
        Cmp::Lt => Cmp::Ge,
        Cmp::Le => Cmp::Gt,
        Cmp::Gt => Cmp::Le,
        Cmp::Ge => Cmp::Lt,
    }
}

pub struct Compiler {
    next_var: i32,
    ints: Vec<IntEnc>,
    bools: Vec<i32>,
    eq_cache: HashMap<(usize, i64), i32>,
    atom_cache: HashMap<(IntVar, Cmp, IntVar), i32>,
    pub clauses: usize,
}

/// `sum(w_i * l_i) + constant` with positive weights.
#[derive(Debug, Clone, Default)]
pub struct WeightedSum {
    pub terms: Vec<(u64, i32)>,
    pub constant: i64,
}

impl WeightedSum {
    pub fn is_unit(&self) -> bool {
        self.terms.iter().all(|t| t.0 == 1)
    }
}

impl Compiler {
    /// Declares every variable of `model` and emits its domain clauses.
    pub fn new<S: ClauseSink>(model: &Model, sink: &mut S) -> Self {
        let mut c = Compiler {
            next_var: 1,
            ints: Vec::with_capacity(model.num_ints()),
            bools: Vec::with_capacity(model.num_bools()),
            eq_cache: HashMap::new(),
            atom_cache: HashMap::new(),
            clauses: 0,
        };
        sink.add_clause(&[TRUE]);
        for _ in 0..model.num_bools() {
            let v = c.fresh();
            c.bools.push(v);
        }
        for decl in model.int_decls() {
            let ge: Vec<i32> = (decl.lo + 1..=decl.hi).map(|_| c.fresh()).collect();
            for w in ge.windows(2) {
                c.emit(sink, &[-w[1], w[0]]);
            }
            c.ints.push(IntEnc {
                lo: decl.lo,
                hi: decl.hi,
                ge,
            });
        }
        c
    }

    pub fn fresh(&mut self) -> i32 {
        self.next_var += 1;
        self.next_var
    }

    pub fn num_vars(&self) -> i32 {
        self.next_var
    }

    /// Adds a clause after dropping false literals; satisfied clauses vanish.
    pub fn emit<S: ClauseSink>(&mut self, sink: &mut S, clause: &[i32]) {
        let mut out: Vec<i32> = Vec::with_capacity(clause.len());
        for &l in clause {
            if l == TRUE || out.contains(&-l) {
                return;
            }
            if l != FALSE && !out.contains(&l) {
                out.push(l);
            }
        }
        if out.is_empty() {
            out.push(FALSE);
        }
        self.clauses += 1;
        sink.add_clause(&out);
    }

    pub fn bool_lit(&self, index: usize) -> i32 {
        self.bools[index]
    }

    /// Literal for `x >= v`.
    pub fn ge(&self, x: IntVar, v: i64) -> i32 {
        let e = &self.ints[x.index()];
        if v <= e.lo {
            TRUE
        } else if v > e.hi {
            FALSE
        } else {
            e.ge[(v - e.lo - 1) as usize]
        }
    }

    /// Literal for `x == v`, created on first use.
    pub fn eq<S: ClauseSink>(&mut self, sink: &mut S, x: IntVar, v: i64) -> i32 {
        let (lo, hi) = {
            let e = &self.ints[x.index()];
            (e.lo, e.hi)
        };
        if v < lo || v > hi {
            return FALSE;
        }
        if lo == hi {
            return TRUE;
        }
        if let Some(&l) = self.eq_cache.get(&(x.index(), v)) {
            return l;
        }
        let (a, b) = (self.ge(x, v), self.ge(x, v + 1));
        let l = if a == TRUE {
            -b
        } else if b == FALSE {
            a
        } else {
            let l = self.fresh();
            self.emit(sink, &[-l, a]);
            self.emit(sink, &[-l, -b]);
            self.emit(sink, &[l, -a, b]);
            l
        };
        self.eq_cache.insert((x.index(), v), l);
        l
    }

    /// Reads integer values back from a solver model.
    pub fn int_value(&self, index: usize, value: impl Fn(i32) -> bool) -> i64 {
        let e = &self.ints[index];
        e.lo + e.ge.iter().take_while(|&&l| value(l)).count() as i64
    }

    fn to_nnf<'a>(&self, f: &'a Formula, neg: bool) -> Nnf<'a> {
        match f {
            Formula::Const(b) => Nnf::Const(*b != neg),
            Formula::Bool(b) => {
                let l = self.bools[b.index()];
                Nnf::Lit(if neg { -l } else { l })
            }
            Formula::IntConst(x, cmp, v) => Nnf::IntConst(*x, if neg { negate(*cmp) } else { *cmp }, *v),
            Formula::IntVars(x, cmp, y) => Nnf::IntVars(*x, if neg { negate(*cmp) } else { *cmp }, *y),
            Formula::Linear(e, cmp, k) => Nnf::Linear(e, if neg { negate(*cmp) } else { *cmp }, *k),
            Formula::Not(inner) => self.to_nnf(inner, !neg),
            Formula::And(parts) => self.junction(parts.iter().map(|p| self.to_nnf(p, neg)), !neg),
            Formula::Or(parts) => self.junction(parts.iter().map(|p| self.to_nnf(p, neg)), neg),
            Formula::Implies(a, b) => {
                let parts = [self.to_nnf(a, !neg), self.to_nnf(b, neg)];
                self.junction(parts.into_iter(), neg)
            }
        }
    }

    /// Flattened conjunction (`and == true`) or disjunction with constants
    /// folded away.
    fn junction<'a>(&self, parts: impl Iterator<Item = Nnf<'a>>, and: bool) -> Nnf<'a> {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Nnf::Const(b) if b == and => {}
                Nnf::Const(_) => return Nnf::Const(!and),
                Nnf::And(inner) if and => out.extend(inner),
                Nnf::Or(inner) if !and => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Nnf::Const(and),
            1 => out.pop().expect("one element"),
            _ if and => Nnf::And(out),
            _ => Nnf::Or(out),
        }
    }

    pub fn assert<S: ClauseSink>(&mut self, sink: &mut S, f: &Formula) {
        let nnf = self.to_nnf(f, false);
        self.assert_nnf(sink, &nnf);
    }

    fn assert_nnf<S: ClauseSink>(&mut self, sink: &mut S, n: &Nnf<'_>) {
        match n {
            Nnf::Const(true) => {}
            Nnf::And(parts) => {
                for p in parts {
                    self.assert_nnf(sink, p);
                }
            }
            Nnf::Or(parts) => {
                let mut base = Vec::new();
                let mut products: Vec<Vec<i32>> = Vec::new();
                let mut width = 1usize;
                for p in parts {
                    if let Nnf::And(conj) = p {
                        if conj.iter().all(Self::is_literal) && width * conj.len() <= 8 {
                            width *= conj.len();
                            let lits = conj.iter().map(|c| self.literal(sink, c)).collect();
                            products.push(lits);
                            continue;
                        }
                    }
                    base.push(self.literal(sink, p));
                }
                let mut clauses = vec![base];
                for choices in products {
                    clauses = clauses
                        .into_iter()
                        .flat_map(|c| {
                            choices.iter().map(move |&l| {
                                let mut c = c.clone();
                                c.push(l);
                                c
                            })
                        })
                        .collect();
                }
                for c in clauses {
                    self.emit(sink, &c);
                }
            }
            other => {
                let l = self.literal(sink, other);
                self.emit(sink, &[l]);
            }
        }
    }

    fn is_literal(n: &Nnf<'_>) -> bool {
        matches!(n, Nnf::Const(_) | Nnf::Lit(_) | Nnf::IntConst(..))
    }

    /// A literal that implies the formula.
    fn literal<S: ClauseSink>(&mut self, sink: &mut S, n: &Nnf<'_>) -> i32 {
        match n {
            Nnf::Const(b) => {
                if *b {
                    TRUE
                } else {
                    FALSE
                }
            }
            Nnf::Lit(l) => *l,
            Nnf::IntConst(x, cmp, v) => self.int_const(sink, *x, *cmp, *v),
            Nnf::IntVars(x, cmp, y) => self.int_vars(sink, *x, *cmp, *y),
            Nnf::Linear(e, cmp, k) => {
                let sum = self.weighted(sink, e);
                let r = self.fresh();
                self.guarded_linear(sink, &sum, *cmp, *k, r);
                r
            }
            Nnf::And(parts) => {
                let lits: Vec<i32> = parts.iter().map(|p| self.literal(sink, p)).collect();
                let r = self.fresh();
                for l in lits {
                    self.emit(sink, &[-r, l]);
                }
                r
            }
            Nnf::Or(parts) => {
                let mut clause: Vec<i32> = parts.iter().map(|p| self.literal(sink, p)).collect();
                let r = self.fresh();
                clause.push(-r);
                self.emit(sink, &clause);
                r
            }
        }
    }

    fn int_const<S: ClauseSink>(&mut self, sink: &mut S, x: IntVar, cmp: Cmp, v: i64) -> i32 {
        match cmp {
            Cmp::Eq => self.eq(sink, x, v),
            Cmp::Ne => -self.eq(sink, x, v),
            Cmp::Ge => self.ge(x, v),
            Cmp::Gt => self.ge(x, v + 1),
            Cmp::Le => -self.ge(x, v + 1),
            Cmp::Lt => -self.ge(x, v),
        }
    }

    /// Literal `r` with `r -> x cmp y`.
    fn int_vars<S: ClauseSink>(&mut self, sink: &mut S, x: IntVar, cmp: Cmp, y: IntVar) -> i32 {
        if let Some(&r) = self.atom_cache.get(&(x, cmp, y)) {
            return r;
        }
        let r = self.fresh();
        let (ex, ey) = (self.ints[x.index()].clone(), self.ints[y.index()].clone());
        match cmp {
            Cmp::Eq => {
                for v in ex.lo.min(ey.lo)..=ex.hi.max(ey.hi) + 1 {
                    let (a, b) = (self.ge(x, v), self.ge(y, v));
                    self.emit(sink, &[-r, -a, b]);
                    self.emit(sink, &[-r, a, -b]);
                }
            }
            Cmp::Ne => {
                for v in ex.lo.max(ey.lo)..=ex.hi.min(ey.hi) {
                    let a = self.eq(sink, x, v);
                    let b = self.eq(sink, y, v);
                    self.emit(sink, &[-r, -a, -b]);
                }
            }
            _ => {
                // a + off <= b
                let (a, b, off, ea) = match cmp {
                    Cmp::Lt => (x, y, 1, &ex),
                    Cmp::Le => (x, y, 0, &ex),
                    Cmp::Gt => (y, x, 1, &ey),
                    _ => (y, x, 0, &ey),
                };
                for v in ea.lo..=ea.hi {
                    let (la, lb) = (self.ge(a, v), self.ge(b, v + off));
                    self.emit(sink, &[-r, -la, lb]);
                }
            }
        }
        self.atom_cache.insert((x, cmp, y), r);
        r
    }

    /// Rewrites a linear expression as positively weighted literals.
    pub fn weighted<S: ClauseSink>(&mut self, sink: &mut S, expr: &LinearExpr) -> WeightedSum {
        let mut sum = WeightedSum {
            terms: Vec::new(),
            constant: expr.constant,
        };
        let push = |sum: &mut WeightedSum, c: i64, l: i32| {
            if l == FALSE || c == 0 {
            } else if l == TRUE {
                sum.constant += c;
            } else if c > 0 {
                sum.terms.push((c as u64, l));
            } else {
                sum.constant += c;
                sum.terms.push(((-c) as u64, -l));
            }
        };
        for &(c, term) in &expr.terms {
            match term {
                Term::Bool(b) => push(&mut sum, c, self.bools[b.index()]),
                Term::IntEq(x, v) => {
                    let l = self.eq(sink, x, v);
                    push(&mut sum, c, l);
                }
                Term::Int(x) => {
                    let e = &self.ints[x.index()];
                    sum.constant += c * e.lo;
                    let lits = e.ge.clone();
                    for l in lits {
                        push(&mut sum, c, l);
                    }
                }
            }
        }
        sum
    }

    /// Binary digits, least significant first, of the weighted literal sum.
    pub fn adder<S: ClauseSink>(&mut self, sink: &mut S, terms: &[(u64, i32)]) -> Vec<i32> {
        let mut columns: Vec<Vec<i32>> = Vec::new();
        for &(w, l) in terms {
            for bit in 0..64 {
                if w >> bit & 1 == 1 {
                    if columns.len() <= bit {
                        columns.resize(bit + 1, Vec::new());
                    }
                    columns[bit].push(l);
                }
            }
        }
        let mut out = Vec::new();
        let mut i = 0;
        while i < columns.len() {
            while columns[i].len() >= 2 {
                let carry;
                let sum;
                if columns[i].len() >= 3 {
                    let c = columns[i].pop().expect("len >= 3");
                    let b = columns[i].pop().expect("len >= 3");
                    let a = columns[i].pop().expect("len >= 3");
                    (sum, carry) = self.full_adder(sink, a, b, c);
                } else {
                    let b = columns[i].pop().expect("len 2");
                    let a = columns[i].pop().expect("len 2");
                    (sum, carry) = self.half_adder(sink, a, b);
                }
                columns[i].insert(0, sum);
                if columns.len() <= i + 1 {
                    columns.push(Vec::new());
                }
                columns[i + 1].push(carry);
            }
            out.push(columns[i].first().copied().unwrap_or(FALSE));
            i += 1;
        }
        out
    }

    fn half_adder<S: ClauseSink>(&mut self, sink: &mut S, a: i32, b: i32) -> (i32, i32) {
        let s = self.fresh();
        let c = self.fresh();
        self.emit(sink, &[-s, a, b]);
        self.emit(sink, &[-s, -a, -b]);
        self.emit(sink, &[s, -a, b]);
        self.emit(sink, &[s, a, -b]);
        self.emit(sink, &[-c, a]);
        self.emit(sink, &[-c, b]);
        self.emit(sink, &[c, -a, -b]);
        (s, c)
    }

    fn full_adder<S: ClauseSink>(&mut self, sink: &mut S, a: i32, b: i32, c: i32) -> (i32, i32) {
        let s = self.fresh();
        let carry = self.fresh();
        for mask in 0..8u32 {
            let lits = [a, b, c];
            let ones = mask.count_ones();
            let clause: Vec<i32> = lits
                .iter()
                .enumerate()
                .map(|(i, &l)| if mask >> i & 1 == 1 { -l } else { l })
                .collect();
            let mut clause = clause;
            clause.push(if ones % 2 == 1 { s } else { -s });
            self.emit(sink, &clause);
        }
        for (x, y) in [(a, b), (a, c), (b, c)] {
            self.emit(sink, &[-x, -y, carry]);
            self.emit(sink, &[x, y, -carry]);
        }
        (s, carry)
    }

    /// Clauses for `value(bits) <= k`, each extended by `extra`.
    pub fn le_const<S: ClauseSink>(&mut self, sink: &mut S, bits: &[i32], k: i64, extra: &[i32]) {
        if k < 0 {
            self.emit(sink, extra);
            return;
        }
        if bits.len() < 63 && k >= (1i64 << bits.len()) - 1 {
            return;
        }
        for i in 0..bits.len() {
            if k >> i & 1 == 1 {
                continue;
            }
            let mut clause: Vec<i32> = extra.to_vec();
            clause.push(-bits[i]);
            for (j, &b) in bits.iter().enumerate().skip(i + 1) {
                if k >> j & 1 == 1 {
                    clause.push(-b);
                }
            }
            self.emit(sink, &clause);
        }
    }

    /// Clauses for `value(bits) >= k`, each extended by `extra`.
    pub fn ge_const<S: ClauseSink>(&mut self, sink: &mut S, bits: &[i32], k: i64, extra: &[i32]) {
        if k <= 0 {
            return;
        }
        let top = (1i64 << bits.len()) - 1;
        if k > top {
            self.emit(sink, extra);
            return;
        }
        let negated: Vec<i32> = bits.iter().map(|&b| -b).collect();
        self.le_const(sink, &negated, top - k, extra);
    }

    /// `r -> sum cmp k`.
    fn guarded_linear<S: ClauseSink>(&mut self, sink: &mut S, sum: &WeightedSum, cmp: Cmp, k: i64, r: i32) {
        let bits = self.adder(sink, &sum.terms);
        let k = k - sum.constant;
        match cmp {
            Cmp::Le => self.le_const(sink, &bits, k, &[-r]),
            Cmp::Lt => self.le_const(sink, &bits, k - 1, &[-r]),
            Cmp::Ge => self.ge_const(sink, &bits, k, &[-r]),
            Cmp::Gt => self.ge_const(sink, &bits, k + 1, &[-r]),
            Cmp::Eq => {
                self.le_const(sink, &bits, k, &[-r]);
                self.ge_const(sink, &bits, k, &[-r]);
            }
            Cmp::Ne => {
                let below = self.fresh();
                let above = self.fresh();
                self.emit(sink, &[-r, below, above]);
                self.le_const(sink, &bits, k - 1, &[-below]);
                self.ge_const(sink, &bits, k + 1, &[-above]);
            }
        }
    }

    /// Unary counter over unit-weight literals: output `j - 1` is forced true
    /// whenever at least `j` inputs are, for `j <= cap`.
    pub fn totalizer<S: ClauseSink>(&mut self, sink: &mut S, lits: &[i32], cap: usize) -> Vec<i32> {
        if lits.len() <= 1 {
            return lits.iter().copied().take(cap).collect();
        }
        let mid = lits.len() / 2;
        let left = self.totalizer(sink, &lits[..mid], cap);
        let right = self.totalizer(sink, &lits[mid..], cap);
        let width = (left.len() + right.len()).min(cap);
        let out: Vec<i32> = (0..width).map(|_| self.fresh()).collect();
        for i in 0..=left.len() {
            for j in 0..=right.len() {
                if i + j == 0 {
                    continue;
                }
                let target = out[(i + j).min(width) - 1];
                let mut clause = vec![target];
                if i > 0 {
                    clause.push(-left[i - 1]);
                }
                if j > 0 {
                    clause.push(-right[j - 1]);
                }
                self.emit(sink, &clause);
            }
        }
        out
    }
}
