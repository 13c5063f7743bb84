//! The line-based hypergraph text format.
//!
//! ```text
//! # comment lines start with '#'; blank lines are ignored
//! 3 5 10        <- header: uniformity n, vertex count p, edge count m
//! 0 1 2         <- m lines of n distinct 0-based vertex ids
//! ...
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use propb_core::{Hypergraph, Vertex};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn parse_ids(line: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| err(line, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Hypergraph, ParseError> {
    let mut content = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = content.next().ok_or_else(|| err(1, "missing header `n p m`"))?;
    let fields = parse_ids(header_line, header)?;
    let [n, p, m] = fields[..] else {
        return Err(err(
            header_line,
            format!("header must be `n p m`, found {} fields", fields.len()),
        ));
    };
    if n == 0 {
        return Err(err(header_line, "uniformity n must be at least 1"));
    }

    let mut edges: Vec<Vec<Vertex>> = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    let mut last_line = header_line;
    for (line, body) in content {
        if edges.len() == m {
            return Err(err(line, format!("header declares {m} edges, found more")));
        }
        let edge = parse_ids(line, body)?;
        if edge.len() != n {
            return Err(err(line, format!("edge has {} vertices, expected {n}", edge.len())));
        }
        if let Some(&v) = edge.iter().find(|&&v| v >= p) {
            return Err(err(line, format!("vertex {v} out of range 0..{p}")));
        }
        let mut key = edge.clone();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return Err(err(line, "edge repeats a vertex"));
        }
        if !seen.insert(key) {
            return Err(err(line, "duplicate edge"));
        }
        edges.push(edge);
        last_line = line;
    }
    if edges.len() != m {
        return Err(err(
            last_line.max(text.lines().count()),
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Hypergraph::normalize(edges, n, p).map_err(|e| err(header_line, e.to_string()))
}

/// Header plus edges in canonical order; [`parse`] inverts it.
pub fn render(h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", h.n(), h.p(), h.num_edges()).unwrap();
    for edge in h.edges() {
        let line: Vec<String> = edge.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}
