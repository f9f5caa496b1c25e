//! `olsq synth | verify | bench | convert`.
//!
//! Exit codes: 0 success, 1 input error, 2 unsatisfiable up to the time
//! bound cap, 3 solver timeout, 4 result rejected by the verifier.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use olsq_core::encode::{encode, EncodingConfig, SynthesisOptions};
use olsq_core::verify::check_result;
use olsq_core::{Circuit, SynthesisError};
use serde_json::json;

use crate::formats::{self, write_result};
use crate::run::{self, Mode, Objective};
use crate::{bench, load_circuit, load_device_file, load_graph_circuit};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_UNSAT: u8 = 2;
pub const EXIT_TIMEOUT: u8 = 3;
pub const EXIT_INVALID: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "olsq", version, about = "Qubit placement and SWAP scheduling for quantum circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a layout and write it as JSON.
    Synth(SynthArgs),
    /// Check a result file against its circuit and device.
    Verify(VerifyArgs),
    /// Run a benchmark manifest and print a CSV table.
    Bench(BenchArgs),
    /// Convert an OpenQASM 2 file to the gate-list format.
    Convert(ConvertArgs),
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "swap")]
    objective: Objective,
    /// Gate list, or `.qasm` file.
    #[arg(long, required_unless_present = "graph")]
    circuit: Option<PathBuf>,
    /// Graph edge list; builds a phase-separation circuit.
    #[arg(long, conflicts_with = "circuit")]
    graph: Option<PathBuf>,
    #[arg(long)]
    device: PathBuf,
    #[arg(long, default_value_t = 3)]
    swap_duration: usize,
    /// Unit SWAP duration for QAOA depth accounting.
    #[arg(long)]
    unit_swaps: bool,
    #[arg(long, default_value_t = 0.3)]
    t_growth: f64,
    #[arg(long)]
    max_t: Option<usize>,
    /// Extra T growth steps after the first satisfiable bound.
    #[arg(long, default_value_t = 0)]
    extra_t: usize,
    /// Seconds per solver call.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the model at the initial time bound as SMT-LIB.
    #[arg(long)]
    dump_model: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    device: PathBuf,
    #[arg(long)]
    result: PathBuf,
    #[arg(long, default_value_t = 3)]
    swap_duration: usize,
    /// Check without dependencies, as for phase-separation circuits.
    #[arg(long)]
    commuting: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn input_error(err: &mut dyn Write, msg: impl std::fmt::Display) -> u8 {
    let _ = writeln!(err, "error: {msg}");
    EXIT_INPUT
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    }
}

fn seconds(s: Option<f64>) -> Result<Option<Duration>, String> {
    s.map(|s| Duration::try_from_secs_f64(s).map_err(|_| format!("invalid timeout {s}"))).transpose()
}

fn synth(a: SynthArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let circuit = match (&a.circuit, &a.graph) {
        (Some(p), _) => load_circuit(p),
        (None, Some(p)) => load_graph_circuit(p),
        (None, None) => unreachable!("clap requires one of them"),
    };
    let circuit = match circuit {
        Ok(c) => c,
        Err(e) => return input_error(err, e),
    };
    let circuit: Circuit = if a.mode == Mode::Qaoa {
        circuit.without_dependencies()
    } else {
        circuit
    };
    let device = match load_device_file(&a.device) {
        Ok(d) => d,
        Err(e) => return input_error(err, e),
    };
    let timeout = match seconds(a.timeout) {
        Ok(t) => t,
        Err(e) => return input_error(err, e),
    };
    let mut options = SynthesisOptions {
        swap_duration: if a.unit_swaps { 1 } else { a.swap_duration },
        growth: a.t_growth,
        extra_steps: a.extra_t,
        timeout,
        ..SynthesisOptions::default()
    };
    if let Some(cap) = a.max_t {
        options.max_time_bound = cap;
    }
    if let Some(path) = &a.dump_model {
        let t = circuit.longest_chain().max(1);
        let config = EncodingConfig::exact(t, options.swap_duration, a.objective.into());
        match encode(&circuit, &device, &config) {
            Ok(enc) => {
                if let Err(e) = std::fs::write(path, enc.model.to_smtlib()) {
                    return input_error(err, format!("{}: {e}", path.display()));
                }
            }
            Err(e) => return input_error(err, e),
        }
    }
    match run::synthesize(&circuit, &device, a.mode, a.objective, &options) {
        Ok(result) => {
            let json = write_result(&result);
            if let Some(p) = &a.out {
                if let Err(e) = std::fs::write(p, &json) {
                    return input_error(err, format!("{}: {e}", p.display()));
                }
            }
            let _ = writeln!(
                out,
                "depth={} swaps={} fidelity={}",
                result.depth_slots, result.swap_count, result.fidelity_scaled
            );
            EXIT_OK
        }
        Err(e @ SynthesisError::TimeBoundExhausted { .. }) => {
            let _ = writeln!(err, "{e}");
            EXIT_UNSAT
        }
        Err(e @ SynthesisError::Timeout { .. }) => {
            let _ = writeln!(err, "{e}");
            EXIT_TIMEOUT
        }
        Err(e) => input_error(err, e),
    }
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let circuit = match load_circuit(&a.circuit) {
        Ok(c) if a.commuting => c.without_dependencies(),
        Ok(c) => c,
        Err(e) => return input_error(err, e),
    };
    let device = match load_device_file(&a.device) {
        Ok(d) => d,
        Err(e) => return input_error(err, e),
    };
    let result = match std::fs::read_to_string(&a.result) {
        Ok(text) => match formats::parse_result(&text) {
            Ok(r) => r,
            Err(e) => return input_error(err, format!("{}: {e}", a.result.display())),
        },
        Err(e) => return input_error(err, format!("{}: {e}", a.result.display())),
    };
    match check_result(&circuit, &device, &result, a.swap_duration) {
        Ok(report) if report.is_valid() => {
            let _ = writeln!(out, "valid");
            EXIT_OK
        }
        Ok(report) => {
            for v in &report.violations {
                let line = json!({
                    "family": v.family.label(),
                    "time": v.time,
                    "gates": v.gates,
                    "swaps": v.swaps,
                    "qubits": v.qubits,
                    "detail": v.detail,
                });
                let _ = writeln!(out, "{line}");
            }
            EXIT_INVALID
        }
        Err(e) => input_error(err, e),
    }
}

fn bench_cmd(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let timeout = match seconds(a.timeout) {
        Ok(t) => t,
        Err(e) => return input_error(err, e),
    };
    match bench::run_manifest(&a.suite, timeout) {
        Ok((_, table)) => match write_output(a.out.as_deref(), &table, out) {
            Ok(()) => EXIT_OK,
            Err(e) => input_error(err, e),
        },
        Err(e) => input_error(err, e),
    }
}

fn convert(a: ConvertArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let text = match std::fs::read_to_string(&a.input) {
        Ok(t) => t,
        Err(e) => return input_error(err, format!("{}: {e}", a.input.display())),
    };
    match formats::convert_qasm_subset(&text) {
        Ok(list) => match write_output(a.out.as_deref(), &list, out) {
            Ok(()) => EXIT_OK,
            Err(e) => input_error(err, e),
        },
        Err(e) => input_error(err, format!("{}: {e}", a.input.display())),
    }
}

/// Parses arguments and runs one command, returning the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match cli.command {
        Command::Synth(a) => synth(a, out, err),
        Command::Verify(a) => verify(a, out, err),
        Command::Bench(a) => bench_cmd(a, out, err),
        Command::Convert(a) => convert(a, out, err),
    }
}
