//! Undirected graphs as edge lists: an optional `nodes <N>` line, then one
//! `a b` pair per line. `#` starts a comment.

use super::FormatError;

pub fn parse_graph(text: &str) -> Result<(usize, Vec<(usize, usize)>), FormatError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| FormatError::Syntax {
            line: i + 1,
            column: 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["nodes", n] if declared.is_none() && edges.is_empty() => {
                declared = Some(n.parse().map_err(|_| err(format!("invalid node count `{n}`")))?);
            }
            [a, b] => {
                let a: usize = a.parse().map_err(|_| err(format!("invalid node `{a}`")))?;
                let b: usize = b.parse().map_err(|_| err(format!("invalid node `{b}`")))?;
                edges.push((a, b));
            }
            _ => return Err(err(format!("expected `a b`, found `{line}`"))),
        }
    }
    let used = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(used);
    if used > n {
        return Err(FormatError::Invalid(format!("edge endpoint outside the declared {n} nodes")));
    }
    Ok((n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edge_lists() {
        assert_eq!(parse_graph("0 1\n1 2 # c\n").unwrap(), (3, vec![(0, 1), (1, 2)]));
        assert_eq!(parse_graph("nodes 5\n0 1").unwrap().0, 5);
        assert!(parse_graph("nodes 2\n0 3").is_err());
        assert!(parse_graph("0 1 2").is_err());
    }
}
