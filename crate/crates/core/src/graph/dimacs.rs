//! Extended DIMACS text format.
//!
//! ```text
//! c comment
//! p apt <n> <m> [directed] [labeled]
//! e <u> <v> [label]      undirected edge, 1-based ids
//! a <u> <v> [label]      arc u -> v, only in directed files
//! ```

use std::fmt::Write as _;

use super::{Digraph, Graph, GraphBuilder, GraphKind};
use crate::error::{Error, Result};

struct Header {
    n: usize,
    m: usize,
    kind: GraphKind,
}

struct EdgeLine {
    line: usize,
    u: usize,
    v: usize,
    label: Option<u32>,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_header(line: usize, toks: &[&str]) -> Result<Header> {
    if toks.len() < 4 || toks[1] != "apt" {
        return Err(perr(line, "expected header `p apt <n> <m> [directed] [labeled]`"));
    }
    let n = toks[2].parse().map_err(|_| perr(line, format!("bad vertex count {:?}", toks[2])))?;
    let m = toks[3].parse().map_err(|_| perr(line, format!("bad edge count {:?}", toks[3])))?;
    let mut kind = GraphKind::PLAIN;
    for &flag in &toks[4..] {
        match flag {
            "directed" if !kind.oriented => kind.oriented = true,
            "labeled" if !kind.labeled => kind.labeled = true,
            other => return Err(perr(line, format!("unknown or repeated header flag {other:?}"))),
        }
    }
    Ok(Header { n, m, kind })
}

fn parse_lines(text: &str) -> Result<(Header, Vec<EdgeLine>)> {
    let mut header: Option<Header> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = toks.first() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(perr(line, "duplicate header"));
                }
                header = Some(parse_header(line, &toks)?);
            }
            "e" | "a" => {
                let h = header.as_ref().ok_or_else(|| perr(line, "edge before header"))?;
                if (tag == "a") != h.kind.oriented {
                    return Err(perr(
                        line,
                        if h.kind.oriented {
                            "undirected edge `e` in a directed graph"
                        } else {
                            "arc `a` in an undirected graph"
                        },
                    ));
                }
                let want = if h.kind.labeled { 4 } else { 3 };
                if toks.len() != want {
                    return Err(perr(line, format!("expected {want} fields, found {}", toks.len())));
                }
                let id = |s: &str| -> Result<usize> {
                    let x: usize = s.parse().map_err(|_| perr(line, format!("bad vertex id {s:?}")))?;
                    if x == 0 || x > h.n {
                        return Err(perr(line, format!("vertex id {x} out of range 1..={}", h.n)));
                    }
                    Ok(x - 1)
                };
                let u = id(toks[1])?;
                let v = id(toks[2])?;
                let label = if h.kind.labeled {
                    Some(toks[3].parse().map_err(|_| perr(line, format!("bad label {:?}", toks[3])))?)
                } else {
                    None
                };
                if u == v {
                    return Err(perr(line, format!("self-loop at vertex {}", u + 1)));
                }
                edges.push(EdgeLine { line, u, v, label });
            }
            other => return Err(perr(line, format!("unknown line type {other:?}"))),
        }
    }
    let header = header.ok_or_else(|| perr(last_line.max(1), "missing header"))?;
    if edges.len() != header.m {
        return Err(perr(last_line, format!("header declares {} edges, found {}", header.m, edges.len())));
    }
    Ok((header, edges))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let (h, lines) = parse_lines(text)?;
    let mut b = GraphBuilder::new(h.n, h.kind);
    for e in lines {
        b.add_edge(e.u, e.v, e.label).map_err(|err| match err {
            Error::InvalidGraph(msg) if msg.starts_with("duplicate") => {
                perr(e.line, format!("duplicate edge {{{}, {}}}", e.u + 1, e.v + 1))
            }
            other => perr(e.line, other.to_string()),
        })?;
    }
    Ok(b.build())
}

/// Directed graph that may contain opposite arc pairs `u -> v`, `v -> u`.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let (h, lines) = parse_lines(text)?;
    if !h.kind.oriented {
        return Err(perr(1, "digraph input needs a `directed` header"));
    }
    if h.kind.labeled {
        return Err(perr(1, "labeled digraphs are not supported"));
    }
    let mut d = Digraph::new(h.n);
    for e in lines {
        d.add_arc(e.u, e.v).map_err(|err| perr(e.line, err.to_string()))?;
    }
    Ok(d)
}

pub fn write_graph(g: &Graph) -> String {
    let kind = g.kind();
    let mut out = format!("p apt {} {}", g.n(), g.m());
    if kind.oriented {
        out.push_str(" directed");
    }
    if kind.labeled {
        out.push_str(" labeled");
    }
    out.push('\n');
    let tag = if kind.oriented { 'a' } else { 'e' };
    for e in g.edges() {
        let _ = write!(out, "{tag} {} {}", e.u + 1, e.v + 1);
        if let Some(l) = e.label {
            let _ = write!(out, " {l}");
        }
        out.push('\n');
    }
    out
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut out = format!("p apt {} {} directed\n", d.n(), d.arcs().len());
    for &(u, v) in d.arcs() {
        let _ = writeln!(out, "a {} {}", u + 1, v + 1);
    }
    out
}
