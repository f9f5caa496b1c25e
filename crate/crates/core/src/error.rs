use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {gate}: qubit q{qubit} is outside the declared range of {num_qubits} qubits")]
    QubitOutOfRange {
        gate: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("gate {gate}: two-qubit gate repeats operand q{qubit}")]
    RepeatedOperand { gate: usize, qubit: usize },
    #[error("dependency ({0}, {1}) must reference existing gates with the first index smaller")]
    InvalidDependency(usize, usize),
    #[error("gate {gate} is not a two-qubit gate; phase separation accepts only two-qubit gates")]
    NotTwoQubit { gate: usize },
    #[error("graph edge ({0}, {1}) is a self-loop")]
    GraphSelfLoop(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeviceError {
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({0}, {1}) is listed more than once")]
    DuplicateEdge(usize, usize),
    #[error("edge ({p}, {q}) references a node outside 0..{num_nodes}")]
    NodeOutOfRange { p: usize, q: usize, num_nodes: usize },
    #[error("node {node} is outside 0..{num_nodes}")]
    UnknownNode { node: usize, num_nodes: usize },
    #[error("{what} fidelity {value} lies outside (0, 1]")]
    FidelityOutOfRange { what: &'static str, value: f64 },
    #[error("{what} fidelity list has {found} entries, expected {expected}")]
    FidelityLength {
        what: &'static str,
        found: usize,
        expected: usize,
    },
}

/// Errors raised while building a constraint model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("integer domain [{lo}, {hi}] is empty")]
    EmptyDomain { lo: i64, hi: i64 },
    #[error("handle {0} does not belong to this model")]
    UnknownHandle(String),
}

/// The solver engine failed; distinct from an unsatisfiable verdict.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("solver backend failure: {0}")]
pub struct SolverError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error("no satisfiable layout up to the time bound cap {cap}")]
    TimeBoundExhausted { cap: usize },
    #[error("solver timed out at time bound {time_bound}")]
    Timeout { time_bound: usize },
    #[error("circuit uses {logical} logical qubits but the device has {physical} physical qubits")]
    TooManyQubits { logical: usize, physical: usize },
    #[error("circuit has two-qubit gates but the device has no edges")]
    NoEdges,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("transition plan violates its invariants: {0}")]
    InvalidPlan(String),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("result does not match the instance: {0}")]
    DimensionMismatch(String),
    #[error("result fails validation with {0} violation(s)")]
    Unchecked(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance exceeds oracle limits (M <= 4, L <= 6, N <= 5): M={m}, L={l}, N={n}")]
    BoundsExceeded { m: usize, l: usize, n: usize },
    #[error("no schedule within {max_slots} time slots")]
    NoSolution { max_slots: usize },
}
