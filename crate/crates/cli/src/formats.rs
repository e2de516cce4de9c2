//! Plain-text graph, stream and vertex-list formats.
//!
//! Graph: a header `n m`, then `m` lines `u v`. A repeated pair adds
//! multiplicity. Stream: a header `n insert|dynamic`, then one event per
//! line, `+ u v` or `- u v`. Vertex list: whitespace-separated ids.
//! Blank lines and lines starting with `#` are skipped everywhere.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use matchest_core::{EdgeStream, Graph, StreamEvent, StreamMode, Vertex};

use crate::error::{CliError, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: FromStr>(what: &'static str, line: usize, tok: Option<&str>, name: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| CliError::Parse { what, line, msg: format!("missing {name}") })?;
    tok.parse().map_err(|_| CliError::Parse { what, line, msg: format!("bad {name} {tok:?}") })
}

fn no_trailing(what: &'static str, line: usize, mut toks: std::str::SplitWhitespace<'_>) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(CliError::Parse { what, line, msg: format!("unexpected token {t:?}") }),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    const W: &str = "graph";
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(CliError::Parse { what: W, line: 1, msg: "missing header".into() })?;
    let mut toks = header.split_whitespace();
    let n: usize = field(W, hl, toks.next(), "vertex count")?;
    let m: usize = field(W, hl, toks.next(), "edge count")?;
    no_trailing(W, hl, toks)?;
    let mut g = Graph::new(n);
    let mut seen = 0;
    for (ln, l) in lines {
        let mut toks = l.split_whitespace();
        let u: Vertex = field(W, ln, toks.next(), "endpoint")?;
        let v: Vertex = field(W, ln, toks.next(), "endpoint")?;
        no_trailing(W, ln, toks)?;
        g.add_edge(u, v).map_err(|e| CliError::Parse { what: W, line: ln, msg: e.to_string() })?;
        seen += 1;
    }
    if seen != m {
        return Err(CliError::Parse { what: W, line: hl, msg: format!("header declares {m} edges, found {seen}") });
    }
    Ok(g)
}

/// Every edge once per unit of multiplicity, in sorted order.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.total_multiplicity());
    for ((u, v), m) in g.edges_with_multiplicity() {
        for _ in 0..m {
            let _ = writeln!(out, "{u} {v}");
        }
    }
    out
}

fn mode_name(mode: StreamMode) -> &'static str {
    match mode {
        StreamMode::InsertionOnly => "insert",
        StreamMode::Dynamic => "dynamic",
    }
}

pub fn parse_stream(text: &str) -> Result<EdgeStream> {
    const W: &str = "stream";
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(CliError::Parse { what: W, line: 1, msg: "missing header".into() })?;
    let mut toks = header.split_whitespace();
    let n: usize = field(W, hl, toks.next(), "vertex count")?;
    let mode = match toks.next() {
        Some("insert") => StreamMode::InsertionOnly,
        Some("dynamic") => StreamMode::Dynamic,
        other => return Err(CliError::Parse { what: W, line: hl, msg: format!("mode must be insert or dynamic, got {other:?}") }),
    };
    no_trailing(W, hl, toks)?;
    let mut events = Vec::new();
    for (ln, l) in lines {
        let mut toks = l.split_whitespace();
        let op = toks.next();
        let u: Vertex = field(W, ln, toks.next(), "endpoint")?;
        let v: Vertex = field(W, ln, toks.next(), "endpoint")?;
        no_trailing(W, ln, toks)?;
        events.push(match op {
            Some("+") => StreamEvent::insert(u, v),
            Some("-") => StreamEvent::delete(u, v),
            _ => return Err(CliError::Parse { what: W, line: ln, msg: format!("event must start with + or -, got {op:?}") }),
        });
    }
    Ok(EdgeStream::new(n, mode, events)?)
}

pub fn write_stream(s: &EdgeStream) -> String {
    let mut out = format!("{} {}\n", s.n(), mode_name(s.mode()));
    for ev in s.replay() {
        let op = if ev.delta() > 0 { '+' } else { '-' };
        let _ = writeln!(out, "{op} {} {}", ev.u, ev.v);
    }
    out
}

pub fn parse_vertex_list(text: &str) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        for tok in l.split_whitespace() {
            out.push(field("vertex list", ln, Some(tok), "vertex")?);
        }
    }
    Ok(out)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_text(path)?)
}

pub fn read_stream(path: &Path) -> Result<EdgeStream> {
    parse_stream(&read_text(path)?)
}
