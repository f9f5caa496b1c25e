//! The line-oriented gate-list format:
//!
//! ```text
//! # comment
//! qubits 3
//! h q0
//! cx q0 q1; cx q1 q2
//! ```
//!
//! Statements end at a newline or `;`. The first statement declares the
//! number of logical qubits.

use std::fmt::Write as _;

use olsq_core::circuit::{Circuit, Gate, Operands};

use super::FormatError;

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn statements(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("");
        let mut offset = 0;
        for stmt in code.split(';') {
            let mut tokens = Vec::new();
            let mut rest = stmt;
            let mut col = offset;
            while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
                let tail = &rest[start..];
                let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
                tokens.push(Token {
                    text: &tail[..len],
                    line: line_no + 1,
                    column: col + start + 1,
                });
                col += start + len;
                rest = &tail[len..];
            }
            if !tokens.is_empty() {
                out.push(tokens);
            }
            offset += stmt.len() + 1;
        }
    }
    out
}

fn syntax(tok: &Token<'_>, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line: tok.line,
        column: tok.column,
        message: message.into(),
    }
}

fn qubit(tok: &Token<'_>) -> Result<usize, FormatError> {
    tok.text
        .strip_prefix('q')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| syntax(tok, format!("expected a qubit like q0, found `{}`", tok.text)))
}

/// Parses a gate list into a circuit without collisions or dependencies.
pub fn parse_program(text: &str) -> Result<Circuit, FormatError> {
    let mut stmts = statements(text).into_iter();
    let header = stmts.next().ok_or(FormatError::Syntax {
        line: 1,
        column: 1,
        message: "missing `qubits <M>` header".into(),
    })?;
    if header[0].text != "qubits" || header.len() != 2 {
        return Err(syntax(&header[0], "first statement must be `qubits <M>`"));
    }
    let num_qubits: usize = header[1]
        .text
        .parse()
        .map_err(|_| syntax(&header[1], format!("invalid qubit count `{}`", header[1].text)))?;
    let mut gates = Vec::new();
    for stmt in stmts {
        let name = stmt[0].text;
        let gate = match &stmt[1..] {
            [a] => Gate::single(name, qubit(a)?),
            [a, b] => Gate::two(name, qubit(a)?, qubit(b)?),
            [] => return Err(syntax(&stmt[0], format!("gate `{name}` has no operands"))),
            [_, _, extra, ..] => return Err(syntax(extra, format!("gate `{name}` has more than two operands"))),
        };
        for (i, q) in gate.operands.iter().enumerate() {
            if q >= num_qubits {
                return Err(syntax(&stmt[1 + i], format!("qubit q{q} outside the declared {num_qubits} qubits")));
            }
        }
        if let Operands::Two(a, b) = gate.operands {
            if a == b {
                return Err(syntax(&stmt[2], format!("gate `{name}` repeats operand q{a}")));
            }
        }
        gates.push(gate);
    }
    Ok(Circuit::new(num_qubits, gates)?)
}

pub fn write_program(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.num_qubits());
    for g in circuit.gates() {
        match g.operands {
            Operands::Single(q) => writeln!(out, "{} q{q}", g.name),
            Operands::Two(a, b) => writeln!(out, "{} q{a} q{b}", g.name),
        }
        .expect("writing to a string");
    }
    out
}
