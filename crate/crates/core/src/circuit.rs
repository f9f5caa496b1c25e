//! Logical circuits and their collision/dependency structure.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CircuitError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Single,
    Two,
}

/// Logical operands of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operands {
    Single(usize),
    Two(usize, usize),
}

impl Operands {
    pub fn kind(self) -> GateKind {
        match self {
            Operands::Single(_) => GateKind::Single,
            Operands::Two(..) => GateKind::Two,
        }
    }

    pub fn first(self) -> usize {
        match self {
            Operands::Single(q) | Operands::Two(q, _) => q,
        }
    }

    pub fn contains(self, qubit: usize) -> bool {
        match self {
            Operands::Single(q) => q == qubit,
            Operands::Two(a, b) => a == qubit || b == qubit,
        }
    }

    pub fn shares_qubit(self, other: Operands) -> bool {
        match self {
            Operands::Single(q) => other.contains(q),
            Operands::Two(a, b) => other.contains(a) || other.contains(b),
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let (a, b) = match self {
            Operands::Single(q) => (q, None),
            Operands::Two(a, b) => (a, Some(b)),
        };
        core::iter::once(a).chain(b)
    }
}

/// A gate of the input program. Only arity and operand identity matter for
/// layout; the name is carried through untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub name: String,
    pub operands: Operands,
}

impl Gate {
    pub fn single(name: impl Into<String>, q: usize) -> Self {
        Gate {
            name: name.into(),
            operands: Operands::Single(q),
        }
    }

    pub fn two(name: impl Into<String>, q0: usize, q1: usize) -> Self {
        Gate {
            name: name.into(),
            operands: Operands::Two(q0, q1),
        }
    }

    pub fn kind(&self) -> GateKind {
        self.operands.kind()
    }
}

/// An ordered gate list over `num_qubits` logical qubits.
///
/// A freshly constructed circuit has empty collision and dependency lists;
/// [`Circuit::derive_collisions`] and [`Circuit::derive_dependencies`] fill
/// them, or [`Circuit::prepare`] does both with the default dependency rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    collisions: Vec<(usize, usize)>,
    dependencies: Vec<(usize, usize)>,
    longest_chain: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        for (index, gate) in gates.iter().enumerate() {
            for q in gate.operands.iter() {
                if q >= num_qubits {
                    return Err(CircuitError::QubitOutOfRange {
                        gate: index,
                        qubit: q,
                        num_qubits,
                    });
                }
            }
            if let Operands::Two(a, b) = gate.operands {
                if a == b {
                    return Err(CircuitError::RepeatedOperand {
                        gate: index,
                        qubit: a,
                    });
                }
            }
        }
        Ok(Circuit {
            num_qubits,
            gates,
            collisions: Vec::new(),
            dependencies: Vec::new(),
            longest_chain: 0,
        })
    }

    /// Collisions, default dependencies and the longest chain in one go.
    pub fn prepare(self) -> Self {
        self.derive_collisions()
            .derive_dependencies(None)
            .expect("default dependencies are always valid")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn num_two_qubit(&self) -> usize {
        self.gates.iter().filter(|g| g.kind() == GateKind::Two).count()
    }

    pub fn collisions(&self) -> &[(usize, usize)] {
        &self.collisions
    }

    pub fn dependencies(&self) -> &[(usize, usize)] {
        &self.dependencies
    }

    pub fn longest_chain(&self) -> usize {
        self.longest_chain
    }

    /// Every ordered pair `(l, l')`, `l < l'`, of gates sharing a logical
    /// qubit, in lexicographic order.
    pub fn derive_collisions(mut self) -> Self {
        let mut collisions = Vec::new();
        for (i, a) in self.gates.iter().enumerate() {
            for (j, b) in self.gates.iter().enumerate().skip(i + 1) {
                if a.operands.shares_qubit(b.operands) {
                    collisions.push((i, j));
                }
            }
        }
        self.collisions = collisions;
        self
    }

    /// Sets the dependency list: the collision list by default, or the
    /// user's pairs (sorted and deduplicated) when given. Also refreshes the
    /// longest dependency chain.
    pub fn derive_dependencies(
        mut self,
        user: Option<&[(usize, usize)]>,
    ) -> Result<Self, CircuitError> {
        let deps = match user {
            None => self.collisions.clone(),
            Some(pairs) => {
                for &(a, b) in pairs {
                    if a >= b || b >= self.gates.len() {
                        return Err(CircuitError::InvalidDependency(a, b));
                    }
                }
                let mut pairs = pairs.to_vec();
                pairs.sort_unstable();
                pairs.dedup();
                pairs
            }
        };
        self.dependencies = deps;
        self.longest_chain = longest_dependency_chain(self.gates.len(), &self.dependencies);
        Ok(self)
    }

    /// Replaces the dependency list with nothing: every gate is declared to
    /// commute with every other.
    pub fn without_dependencies(mut self) -> Self {
        self.dependencies.clear();
        self.longest_chain = usize::from(!self.gates.is_empty());
        self
    }

    /// Dependency predecessors of every gate.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.gates.len()];
        for &(a, b) in &self.dependencies {
            preds[b].push(a);
        }
        preds
    }
}

/// Number of gates on the longest path of the dependency DAG. Pairs always
/// point forward in gate order, so one sweep in index order is a topological
/// pass.
pub fn longest_dependency_chain(num_gates: usize, deps: &[(usize, usize)]) -> usize {
    let mut preds = vec![Vec::new(); num_gates];
    for &(a, b) in deps {
        preds[b].push(a);
    }
    let mut chain = vec![0usize; num_gates];
    for l in 0..num_gates {
        chain[l] = 1 + preds[l].iter().map(|&p| chain[p]).max().unwrap_or(0);
    }
    chain.into_iter().max().unwrap_or(0)
}
