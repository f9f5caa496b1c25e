//! Mode dispatch shared by the command line and the benchmark runner.

use clap::ValueEnum;
use olsq_core::encode::{synthesize as synthesize_exact, ObjectiveKind, SynthesisOptions};
use olsq_core::qaoa::synthesize_qaoa;
use olsq_core::transition::synthesize_tb;
use olsq_core::{Circuit, Device, SynthesisError, SynthesisResult};
use serde::{Deserialize, Serialize};

use crate::sat::SatSolver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Tb,
    Qaoa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Depth,
    Swap,
    Fidelity,
}

impl From<Objective> for ObjectiveKind {
    fn from(o: Objective) -> Self {
        match o {
            Objective::Depth => ObjectiveKind::Depth,
            Objective::Swap => ObjectiveKind::Swap,
            Objective::Fidelity => ObjectiveKind::Fidelity,
        }
    }
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Tb => "tb",
            Mode::Qaoa => "qaoa",
        }
    }
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Depth => "depth",
            Objective::Swap => "swap",
            Objective::Fidelity => "fidelity",
        }
    }
}

/// Runs one synthesizer with the CaDiCaL backend. The circuit must already
/// carry its collisions and dependencies.
pub fn synthesize(
    circuit: &Circuit,
    device: &Device,
    mode: Mode,
    objective: Objective,
    options: &SynthesisOptions,
) -> Result<SynthesisResult, SynthesisError> {
    let solver = SatSolver::new();
    match mode {
        Mode::Exact => synthesize_exact(circuit, device, objective.into(), options, solver),
        Mode::Tb => synthesize_tb(circuit, device, objective.into(), options, solver).map(|(_, r)| r),
        Mode::Qaoa => synthesize_qaoa(circuit, device, objective.into(), options, solver).map(|o| o.result),
    }
}
