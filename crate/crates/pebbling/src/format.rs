//! Line-oriented text formats.
//!
//! Pebble-graph files:
//! ```text
//! c <comment>        ignored
//! g <n> <m>          header; first non-comment line
//! e <u> <v>          one per edge, 0-based, u != v
//! p <v> <count>      pebble count; omitted vertices hold 0
//! r <v>              optional target (at most one)
//! ```
//!
//! Signature files: `a <u> <v> <mult>` lines with `mult >= 1`.
//! Label sidecars: `l <vertex> <label>` lines.

use std::fmt::Write as _;

use crate::distribution::PebbleDistribution;
use crate::error::ParseError;
use crate::graph::Graph;
use crate::signature::Signature;

/// A parsed pebble-graph file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PebbleGraphFile {
    pub graph: Graph,
    pub distribution: PebbleDistribution,
    pub target: Option<usize>,
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

fn parse_index(field: &str, n: usize, lineno: usize) -> Result<usize, ParseError> {
    let v: usize = field
        .parse()
        .map_err(|_| ParseError::new(lineno, format!("expected a vertex index, got `{field}`")))?;
    if v >= n {
        return Err(ParseError::new(
            lineno,
            format!("vertex {v} out of range for {n} vertices"),
        ));
    }
    Ok(v)
}

fn parse_count(field: &str, lineno: usize) -> Result<u64, ParseError> {
    if field.starts_with('-') {
        return Err(ParseError::new(
            lineno,
            format!("negative count `{field}` is not allowed"),
        ));
    }
    field
        .parse()
        .map_err(|_| ParseError::new(lineno, format!("expected a count, got `{field}`")))
}

/// Parses the pebble-graph format.
pub fn parse_pebble_graph(input: &str) -> Result<PebbleGraphFile, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    let mut counts_seen: Vec<bool> = Vec::new();
    let mut target: Option<usize> = None;

    for (i, raw) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields = split_fields(line);
        match fields[0] {
            "g" => {
                if header.is_some() {
                    return Err(ParseError::new(lineno, "duplicate `g` header"));
                }
                if fields.len() != 3 {
                    return Err(ParseError::new(lineno, "header must be `g <n> <m>`"));
                }
                let n: usize = fields[1].parse().map_err(|_| {
                    ParseError::new(lineno, format!("bad vertex count `{}`", fields[1]))
                })?;
                let m: usize = fields[2].parse().map_err(|_| {
                    ParseError::new(lineno, format!("bad edge count `{}`", fields[2]))
                })?;
                header = Some((n, m));
                counts = vec![0; n];
                counts_seen = vec![false; n];
            }
            "e" => {
                let (n, _) = header
                    .ok_or_else(|| ParseError::new(lineno, "`e` line before `g` header"))?;
                if fields.len() != 3 {
                    return Err(ParseError::new(lineno, "edge line must be `e <u> <v>`"));
                }
                let u = parse_index(fields[1], n, lineno)?;
                let v = parse_index(fields[2], n, lineno)?;
                if u == v {
                    return Err(ParseError::new(lineno, format!("loop edge at vertex {u}")));
                }
                let e = (u.min(v), u.max(v));
                if edges.contains(&e) {
                    return Err(ParseError::new(
                        lineno,
                        format!("duplicate edge {{{},{}}}", e.0, e.1),
                    ));
                }
                edges.push(e);
            }
            "p" => {
                let (n, _) = header
                    .ok_or_else(|| ParseError::new(lineno, "`p` line before `g` header"))?;
                if fields.len() != 3 {
                    return Err(ParseError::new(lineno, "pebble line must be `p <v> <count>`"));
                }
                let v = parse_index(fields[1], n, lineno)?;
                if counts_seen[v] {
                    return Err(ParseError::new(
                        lineno,
                        format!("duplicate pebble count for vertex {v}"),
                    ));
                }
                counts_seen[v] = true;
                counts[v] = parse_count(fields[2], lineno)?;
            }
            "r" => {
                let (n, _) = header
                    .ok_or_else(|| ParseError::new(lineno, "`r` line before `g` header"))?;
                if fields.len() != 2 {
                    return Err(ParseError::new(lineno, "target line must be `r <v>`"));
                }
                if target.is_some() {
                    return Err(ParseError::new(lineno, "duplicate `r` line"));
                }
                target = Some(parse_index(fields[1], n, lineno)?);
            }
            other => {
                return Err(ParseError::new(
                    lineno,
                    format!("unknown line type `{other}`"),
                ));
            }
        }
    }

    let (n, m) = header.ok_or_else(|| ParseError::new(input.lines().count() + 1, "missing `g` header"))?;
    if edges.len() != m {
        return Err(ParseError::new(
            input.lines().count() + 1,
            format!("header promises {m} edges but {} were given", edges.len()),
        ));
    }
    let graph = Graph::new(n, &edges)
        .map_err(|e| ParseError::new(input.lines().count() + 1, e.to_string()))?;
    Ok(PebbleGraphFile {
        graph,
        distribution: PebbleDistribution::new(counts),
        target,
    })
}

/// Writes the pebble-graph format; byte-stable for a fixed instance.
pub fn write_pebble_graph(
    g: &Graph,
    p: &PebbleDistribution,
    target: Option<usize>,
) -> String {
    let mut out = String::new();
    writeln!(out, "g {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    for v in 0..g.vertex_count() {
        if v < p.len() && p.count(v) > 0 {
            writeln!(out, "p {} {}", v, p.count(v)).unwrap();
        }
    }
    if let Some(r) = target {
        writeln!(out, "r {r}").unwrap();
    }
    out
}

/// Parses a signature file against a known vertex count.
pub fn parse_signature(input: &str, vertex_count: usize) -> Result<Signature, ParseError> {
    let mut sig = Signature::new();
    for (i, raw) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields = split_fields(line);
        if fields[0] != "a" || fields.len() != 4 {
            return Err(ParseError::new(lineno, "arc line must be `a <u> <v> <mult>`"));
        }
        let u = parse_index(fields[1], vertex_count, lineno)?;
        let v = parse_index(fields[2], vertex_count, lineno)?;
        if u == v {
            return Err(ParseError::new(lineno, format!("loop arc at vertex {u}")));
        }
        let m = parse_count(fields[3], lineno)?;
        if m == 0 {
            return Err(ParseError::new(lineno, "arc multiplicity must be >= 1"));
        }
        if sig.multiplicity(u, v) > 0 {
            return Err(ParseError::new(lineno, format!("duplicate arc ({u},{v})")));
        }
        sig.add_arc(u, v, m)
            .map_err(|e| ParseError::new(lineno, e.to_string()))?;
    }
    Ok(sig)
}

pub fn write_signature(sig: &Signature) -> String {
    let mut out = String::new();
    for ((u, v), m) in sig.arcs() {
        writeln!(out, "a {u} {v} {m}").unwrap();
    }
    out
}

/// Writes a distribution as bare `p` lines (used for witness files).
pub fn write_distribution(p: &PebbleDistribution) -> String {
    let mut out = String::new();
    for v in 0..p.len() {
        if p.count(v) > 0 {
            writeln!(out, "p {} {}", v, p.count(v)).unwrap();
        }
    }
    out
}

/// Writes a label sidecar (`l <vertex> <label>` lines).
pub fn write_labels(labels: &[String]) -> String {
    let mut out = String::new();
    for (v, label) in labels.iter().enumerate() {
        writeln!(out, "l {v} {label}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let text = "c a path\ng 3 2\ne 0 1\ne 1 2\np 0 4\nr 2\n";
        let f = parse_pebble_graph(text).unwrap();
        assert_eq!(f.graph.vertex_count(), 3);
        assert_eq!(f.distribution.counts(), &[4, 0, 0]);
        assert_eq!(f.target, Some(2));
        let written = write_pebble_graph(&f.graph, &f.distribution, f.target);
        let again = parse_pebble_graph(&written).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn rejects_duplicate_edges_with_line_number() {
        let text = "g 2 2\ne 0 1\ne 1 0\n";
        let err = parse_pebble_graph(text).unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn rejects_out_of_range_and_negative() {
        let err = parse_pebble_graph("g 2 1\ne 0 2\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_pebble_graph("g 2 0\np 0 -3\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("negative"));
    }

    #[test]
    fn signature_file_round_trip() {
        let sig = Signature::from_arcs([((0, 1), 2), ((2, 1), 7)]).unwrap();
        let text = write_signature(&sig);
        assert_eq!(parse_signature(&text, 3).unwrap(), sig);
        assert!(parse_signature("a 0 0 1\n", 3).is_err());
        assert!(parse_signature("a 0 1 0\n", 3).is_err());
    }
}
