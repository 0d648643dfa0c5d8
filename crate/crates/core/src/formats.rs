//! Text formats: DIMACS `.col` graphs and per-vertex color lists.
//!
//! DIMACS: `c` comment lines, one `p edge <n> <m>` header, `e <u> <v>` edge
//! lines with 1-indexed endpoints. Duplicate edges are tolerated.
//!
//! Lists: one line per vertex, `<label>: c1 c2 ...`, where the label is the
//! 1-indexed vertex id. Vertices not mentioned get the full palette. Blank
//! lines and lines starting with `c` or `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::{Color, Palette};

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        let mut fields = line.split_whitespace();
        let err = |msg: &str| Error::Input(format!("line {}: {msg}: '{line}'", lineno + 1));
        match fields.next() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(err("duplicate problem line"));
                }
                match fields.next() {
                    Some("edge" | "edges" | "col") => {}
                    _ => return Err(err("expected 'p edge <n> <m>'")),
                }
                let count = fields
                    .next()
                    .and_then(|f| f.parse::<usize>().ok())
                    .ok_or_else(|| err("bad vertex count"))?;
                fields
                    .next()
                    .and_then(|f| f.parse::<usize>().ok())
                    .ok_or_else(|| err("bad edge count"))?;
                n = Some(count);
            }
            Some("e") => {
                let n = n.ok_or_else(|| err("edge before problem line"))?;
                let mut endpoint = || -> Result<usize> {
                    let id = fields
                        .next()
                        .and_then(|f| f.parse::<usize>().ok())
                        .ok_or_else(|| err("bad edge endpoint"))?;
                    if id == 0 || id > n {
                        return Err(err("endpoint out of range"));
                    }
                    Ok(id - 1)
                };
                let (u, v) = (endpoint()?, endpoint()?);
                if u == v {
                    return Err(err("self-loop"));
                }
                edges.push((u, v));
            }
            Some(_) => return Err(err("unrecognized line")),
        }
    }
    let n = n.ok_or_else(|| Error::Input("missing 'p edge' line".into()))?;
    Graph::new(n, edges)
}

/// DIMACS text with optional leading comment lines.
pub fn write_dimacs(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p edge {} {}", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn parse_lists(text: &str, n: usize, k: u32) -> Result<Vec<Palette>> {
    let mut palettes = vec![Palette::full(k); n];
    let mut seen = vec![false; n];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == "c" || line.starts_with("c ") {
            continue;
        }
        let err = |msg: String| Error::Input(format!("line {}: {msg}", lineno + 1));
        let (label, colors) = line
            .split_once(':')
            .ok_or_else(|| err(format!("expected '<vertex>: colors', got '{line}'")))?;
        let id: usize = label
            .trim()
            .parse()
            .map_err(|_| err(format!("bad vertex label '{}'", label.trim())))?;
        if id == 0 || id > n {
            return Err(err(format!("vertex {id} outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[id - 1], true) {
            return Err(err(format!("vertex {id} listed twice")));
        }
        let mut p = Palette::EMPTY;
        for tok in colors.split_whitespace() {
            let c: Color = tok.parse().map_err(|_| err(format!("bad color '{tok}'")))?;
            if c == 0 || c > k {
                return Err(err(format!("color {c} outside 1..={k}")));
            }
            p = p.with(c);
        }
        palettes[id - 1] = p;
    }
    Ok(palettes)
}

pub fn write_lists(palettes: &[Palette], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    for (v, p) in palettes.iter().enumerate() {
        let colors: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{}: {}", v + 1, colors.join(" "));
    }
    out
}
