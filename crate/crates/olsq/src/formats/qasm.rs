//! Conversion of the OpenQASM 2 subset used by common benchmark sets:
//! one quantum register and plain one- or two-qubit gate calls.

use std::fmt::Write as _;

use super::FormatError;

fn unsupported(line: usize, what: impl Into<String>) -> FormatError {
    FormatError::Unsupported {
        line,
        feature: what.into(),
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column: 1,
        message: message.into(),
    }
}

/// `name[index]`
fn register_ref(text: &str, line: usize) -> Result<(&str, usize), FormatError> {
    let text = text.trim();
    let open = text.find('[').ok_or_else(|| syntax(line, format!("expected `reg[i]`, found `{text}`")))?;
    let close = text
        .strip_suffix(']')
        .ok_or_else(|| syntax(line, format!("expected `reg[i]`, found `{text}`")))?;
    let index = close[open + 1..]
        .trim()
        .parse()
        .map_err(|_| syntax(line, format!("invalid register index in `{text}`")))?;
    Ok((text[..open].trim(), index))
}

/// Converts QASM text to the gate-list format.
pub fn convert_qasm_subset(text: &str) -> Result<String, FormatError> {
    let mut register: Option<(String, usize)> = None;
    let mut body = String::new();
    // statements may span lines; track the line each one starts on
    let mut stmt = String::new();
    let mut stmt_line = 1;
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let code = raw.split("//").next().unwrap_or("");
        for (j, piece) in code.split(';').enumerate() {
            if j > 0 {
                statements.push((stmt_line, std::mem::take(&mut stmt)));
            }
            if stmt.trim().is_empty() && !piece.trim().is_empty() {
                stmt_line = i + 1;
            }
            stmt.push_str(piece);
            stmt.push(' ');
        }
    }
    if !stmt.trim().is_empty() {
        return Err(syntax(stmt_line, "statement is missing its `;`"));
    }

    for (line, stmt) in statements {
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        let head = stmt.split(|c: char| c.is_whitespace() || c == '(').next().unwrap_or("");
        match head {
            "OPENQASM" | "include" | "barrier" => continue,
            "creg" => return Err(unsupported(line, "classical registers")),
            "measure" => return Err(unsupported(line, "measurement into classical bits")),
            "if" => return Err(unsupported(line, "classical control flow")),
            "gate" | "opaque" => return Err(unsupported(line, "custom gate definitions")),
            "reset" => return Err(unsupported(line, "reset")),
            "qreg" => {
                if register.is_some() {
                    return Err(unsupported(line, "more than one quantum register"));
                }
                let (name, size) = register_ref(&stmt[4..], line)?;
                register = Some((name.to_string(), size));
                continue;
            }
            _ => {}
        }
        let (reg_name, size) = register
            .as_ref()
            .ok_or_else(|| syntax(line, "gate before the `qreg` declaration"))?;
        // the name runs up to the first whitespace outside parentheses
        let mut depth = 0i32;
        let mut split = stmt.len();
        for (i, c) in stmt.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                c if c.is_whitespace() && depth == 0 => {
                    split = i;
                    break;
                }
                _ => {}
            }
        }
        let name: String = stmt[..split].chars().filter(|c| !c.is_whitespace()).collect();
        let args: Vec<&str> = stmt[split..].split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
        if args.is_empty() || args.len() > 2 {
            return Err(unsupported(line, format!("gate `{name}` with {} operands", args.len())));
        }
        let mut qubits = Vec::new();
        for a in args {
            let (reg, index) = register_ref(a, line)?;
            if reg != reg_name {
                return Err(syntax(line, format!("unknown register `{reg}`")));
            }
            if index >= *size {
                return Err(syntax(line, format!("index {index} outside register `{reg}` of size {size}")));
            }
            qubits.push(index);
        }
        match qubits.as_slice() {
            [q] => writeln!(body, "{name} q{q}"),
            [a, b] => writeln!(body, "{name} q{a} q{b}"),
            _ => unreachable!("one or two operands"),
        }
        .expect("writing to a string");
    }
    let (_, size) = register.ok_or_else(|| syntax(1, "no `qreg` declaration"))?;
    Ok(format!("qubits {size}\n{body}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converts_examples() {
        assert_eq!(convert_qasm_subset("qreg q[2]; cx q[0],q[1];").unwrap(), "qubits 2\ncx q0 q1\n");
        let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n// comment\nrz(1.571) q[1];\ncx q[2], q[0];\n";
        assert_eq!(convert_qasm_subset(text).unwrap(), "qubits 3\nrz(1.571) q1\ncx q2 q0\n");
    }

    #[test]
    fn rejects_unsupported() {
        assert!(matches!(
            convert_qasm_subset("qreg q[2];\ncreg c[1];"),
            Err(FormatError::Unsupported { line: 2, .. })
        ));
        assert!(matches!(
            convert_qasm_subset("qreg q[3]; ccx q[0],q[1],q[2];"),
            Err(FormatError::Unsupported { .. })
        ));
        assert!(convert_qasm_subset("qreg q[2]; measure q[0] -> c[0];").is_err());
        assert!(convert_qasm_subset("qreg q[2]; qreg r[2];").is_err());
        assert!(convert_qasm_subset("qreg q[2]; cx q[0],q[2];").is_err());
        assert!(convert_qasm_subset("qreg q[2]; cx q[0],q[1]").is_err());
    }
}
