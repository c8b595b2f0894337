use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// JSON form of a graph: `{"vertices":[...], "edges":[["u","v"],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// Parses edge-list text.
///
/// Each line is `u v` (an edge), a single token `u` (an isolated vertex),
/// blank, or a `#` comment. Duplicate edges collapse; self-loops and lines
/// with more than two tokens are rejected with their 1-based line number.
pub fn parse_edge_list(text: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(text)
        .map_err(|e| Error::input(0, format!("input is not UTF-8: {e}")))?;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => vertices.push(*v),
            [a, b] if a == b => return Err(Error::input(line_no, format!("self-loop on `{a}`"))),
            [a, b] => edges.push((*a, *b)),
            _ => {
                return Err(Error::input(
                    line_no,
                    format!("expected `u v`, found {} tokens", tokens.len()),
                ))
            }
        }
    }
    Graph::new(vertices, edges)
}

/// `#@key arg...` annotation lines, with their 1-based line numbers.
/// Plain edge-list readers treat these as comments.
pub fn annotations(text: &str) -> Vec<(usize, Vec<String>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.trim().strip_prefix("#@")?;
            Some((i + 1, body.split_whitespace().map(str::to_string).collect()))
        })
        .collect()
}
