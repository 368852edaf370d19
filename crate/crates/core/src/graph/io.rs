//! Edge-list documents: a `<n> <m>` header followed by `m` lines `<u> <v>`.
//! Lines starting with `#` are comments; LF and CRLF are both accepted.

use std::fmt::Write;

use super::Graph;
use crate::{Error, Result, Vertex};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn two_numbers(text: &str, line: usize, what: &str) -> Result<(u64, u64)> {
    let mut fields = text.split_whitespace();
    let parse = |f: Option<&str>| -> Result<u64> {
        let f = f.ok_or_else(|| parse_err(line, format!("expected {what}")))?;
        f.parse()
            .map_err(|_| parse_err(line, format!("invalid integer `{f}` in {what}")))
    };
    let a = parse(fields.next())?;
    let b = parse(fields.next())?;
    if let Some(extra) = fields.next() {
        return Err(parse_err(line, format!("unexpected token `{extra}` in {what}")));
    }
    Ok((a, b))
}

/// Parses an edge-list document.
///
/// The vertex set is the union of the edge endpoints and, when the header
/// declares more vertices than the edges mention, the smallest unused
/// positive labels.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(u64, u64)> = None;
    let mut g = Graph::new();
    let mut seen_edges = 0u64;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match header {
            None => header = Some(two_numbers(line, line_no, "header `<n> <m>`")?),
            Some((n, m)) => {
                if seen_edges == m {
                    return Err(parse_err(line_no, format!("more than the declared {m} edges")));
                }
                let (u, v) = two_numbers(line, line_no, "edge `<u> <v>`")?;
                g.add_edge(u, v).map_err(|e| parse_err(line_no, e.to_string()))?;
                if g.vertex_count() as u64 > n {
                    return Err(parse_err(
                        line_no,
                        format!("edges mention more than the declared {n} vertices"),
                    ));
                }
                seen_edges += 1;
            }
        }
    }

    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing header `<n> <m>`"))?;
    if seen_edges != m {
        return Err(parse_err(
            last_line.max(1),
            format!("declared {m} edges, found {seen_edges}"),
        ));
    }
    let mut next: Vertex = 1;
    while (g.vertex_count() as u64) < n {
        if !g.contains_vertex(next) {
            g.add_vertex(next);
        }
        next += 1;
    }
    Ok(g)
}

/// Serializes in canonical form: header, then edges in lexicographic order.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
