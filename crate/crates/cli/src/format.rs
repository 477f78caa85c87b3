//! Plain-text graph and matching files.
//!
//! Graph files:
//!
//! ```text
//! c comment
//! p edge <n> <m>
//! t <target>          optional
//! b <side bits>       optional, one 0/1 per vertex, 1 = B side
//! e <u> <v>           m times, 1-based
//! ```
//!
//! Matching files use `s <size>` followed by `m <u> <v>` lines.

use std::fmt::Write as _;

use matchkern::chain::Bipartition;
use matchkern::{Graph, GraphError, Matching};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub graph: Graph,
    pub target: Option<usize>,
    pub sides: Option<Vec<bool>>,
    pub comments: Vec<String>,
}

impl InstanceFile {
    pub fn new(graph: Graph) -> Self {
        InstanceFile {
            graph,
            target: None,
            sides: None,
            comments: Vec::new(),
        }
    }

    /// Bipartition from the `b` line, else by 2-coloring.
    pub fn bipartition(&self) -> Result<Bipartition, GraphError> {
        match &self.sides {
            Some(s) => {
                let parts = Bipartition::new(s.clone());
                parts.check(&self.graph)?;
                Ok(parts)
            }
            None => Bipartition::from_graph(&self.graph),
        }
    }
}

fn number(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("bad {what} {tok:?}")))
}

fn vertex(tok: Option<&str>, line: usize, n: usize) -> Result<usize, ParseError> {
    let v = number(tok, line, "vertex")?;
    if v == 0 || v > n {
        return Err(err(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

fn no_trailing<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<(), ParseError> {
    match toks.next() {
        Some(t) => Err(err(line, format!("unexpected token {t:?}"))),
        None => Ok(()),
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut file = InstanceFile::new(Graph::new(0));
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => file.comments.push(raw.trim_start()[1..].trim().to_string()),
            "p" => {
                if header.is_some() {
                    return Err(err(line, "second header"));
                }
                if toks.next() != Some("edge") {
                    return Err(err(line, "expected \"p edge <n> <m>\""));
                }
                let n = number(toks.next(), line, "vertex count")?;
                let m = number(toks.next(), line, "edge count")?;
                no_trailing(toks, line)?;
                header = Some((n, m));
                file.graph = Graph::new(n);
            }
            "t" | "b" | "e" if header.is_none() => {
                return Err(err(line, "record before header"));
            }
            "t" => {
                file.target = Some(number(toks.next(), line, "target")?);
                no_trailing(toks, line)?;
            }
            "b" => {
                let n = header.unwrap().0;
                let bits: String = toks.collect();
                if bits.len() != n {
                    return Err(err(
                        line,
                        format!("{} side bits for {n} vertices", bits.len()),
                    ));
                }
                let sides = bits
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(err(line, format!("bad side bit {c:?}"))),
                    })
                    .collect::<Result<_, _>>()?;
                file.sides = Some(sides);
            }
            "e" => {
                let n = header.unwrap().0;
                let u = vertex(toks.next(), line, n)?;
                let v = vertex(toks.next(), line, n)?;
                no_trailing(toks, line)?;
                file.graph.add_edge(u, v).map_err(|e| match e {
                    GraphError::SelfLoop(_) => err(line, format!("self-loop at {}", u + 1)),
                    GraphError::DuplicateEdge(..) => {
                        err(line, format!("duplicate edge {} {}", u + 1, v + 1))
                    }
                    other => err(line, other.to_string()),
                })?;
            }
            other => return Err(err(line, format!("unknown record {other:?}"))),
        }
    }
    let (_, m) = header.ok_or_else(|| err(last, "missing header"))?;
    if file.graph.m_live() != m {
        return Err(err(
            last,
            format!("header promises {m} edges, found {}", file.graph.m_live()),
        ));
    }
    if let Some(sides) = &file.sides {
        if let Some((u, v)) = file.graph.edges().find(|&(u, v)| sides[u] == sides[v]) {
            return Err(err(
                last,
                format!("edge {} {} lies inside one side", u + 1, v + 1),
            ));
        }
    }
    Ok(file)
}

/// Writes live vertices only, renumbered densely in id order.
pub fn write_instance(file: &InstanceFile) -> String {
    let (g, map) = file.graph.compact();
    let mut out = String::new();
    for c in &file.comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p edge {} {}", g.capacity(), g.m_live());
    if let Some(t) = file.target {
        let _ = writeln!(out, "t {t}");
    }
    if let Some(sides) = &file.sides {
        let bits: String = (0..file.graph.capacity())
            .filter(|&v| map[v].is_some())
            .map(|v| if sides[v] { '1' } else { '0' })
            .collect();
        let _ = writeln!(out, "b {bits}");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn parse_matching(text: &str, n: usize) -> Result<Matching, ParseError> {
    let mut m = Matching::new(n);
    let mut size = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("s") => {
                size = Some(number(toks.next(), line, "size")?);
                no_trailing(toks, line)?;
            }
            Some("m") => {
                let u = vertex(toks.next(), line, n)?;
                let v = vertex(toks.next(), line, n)?;
                no_trailing(toks, line)?;
                m.add(u, v).map_err(|e| err(line, e.to_string()))?;
            }
            Some(other) => return Err(err(line, format!("unknown record {other:?}"))),
        }
    }
    match size {
        Some(s) if s != m.size() => Err(err(
            last,
            format!("size line says {s}, found {} pairs", m.size()),
        )),
        _ => Ok(m),
    }
}

pub fn write_matching(m: &Matching) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s {}", m.size());
    for (u, v) in m.pairs() {
        let _ = writeln!(out, "m {} {}", u + 1, v + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_on_two_vertices() {
        let f = parse_instance("p edge 2 1\ne 1 2\n").unwrap();
        assert_eq!(f.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(f.target, None);
    }

    #[test]
    fn five_cycle_round_trip() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let mut f = InstanceFile::new(g);
        f.target = Some(2);
        f.comments.push("five cycle".into());
        let back = parse_instance(&write_instance(&f)).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_bad_lines() {
        let e = parse_instance("p edge 2 1\ne 1 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("self-loop"));
        assert!(parse_instance("p edge 2 2\ne 1 2\ne 2 1\n")
            .unwrap_err()
            .msg
            .contains("duplicate"));
        assert!(parse_instance("e 1 2\n").is_err());
        assert!(parse_instance("p edge 2 1\ne 1 3\n").is_err());
        assert!(parse_instance("p edge 2 2\ne 1 2\n").is_err());
        assert!(parse_instance("p edge 2 1\nq\ne 1 2\n").is_err());
        assert!(parse_instance("p edge 2 1\nb 00\ne 1 2\n").is_err());
    }

    #[test]
    fn sides_and_target() {
        let f = parse_instance("c x\np edge 3 2\nt 1\nb 011\ne 1 2\ne 1 3\n").unwrap();
        assert_eq!(f.sides, Some(vec![false, true, true]));
        assert_eq!(f.target, Some(1));
        assert!(f.bipartition().is_ok());
    }

    #[test]
    fn matching_round_trip() {
        let m = Matching::from_pairs(4, &[(0, 3), (1, 2)]).unwrap();
        assert_eq!(parse_matching(&write_matching(&m), 4).unwrap(), m);
        assert!(parse_matching("s 2\nm 1 2\n", 2).is_err());
        assert!(parse_matching("m 1 2\nm 2 1\n", 2).is_err());
    }
}
