//! File formats: `hatgraph v1` text, `hatstrat-v1` JSON, `satmat v1` text,
//! and solver verdict lines.

use std::collections::HashMap;

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::graphs::{Mode, SightGraph};
use crate::linear::LinearStrategy;
use crate::saturated::SaturatedMatrix;
use crate::solver::SolveVerdict;
use crate::strategies::TableStrategy;
use crate::words::{all_words, Color};

pub const STRATEGY_FORMAT: &str = "hatstrat-v1";

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    match tok.map(str::parse) {
        Some(Ok(v)) => Ok(v),
        Some(Err(_)) => parse_err(line, format!("malformed {what}")),
        None => parse_err(line, format!("missing {what}")),
    }
}

/// Non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.starts_with('#'))
}

/// Parses a `hatgraph v1` file. Every line must be the header, the mode,
/// the vertex count, an `e u v` edge or a `#` comment.
pub fn parse_graph(text: &str) -> Result<SightGraph> {
    let mut lines = content_lines(text);
    let mut header = |want: &str| -> Result<(usize, Vec<&str>)> {
        match lines.next() {
            Some((no, l)) => Ok((no, l.split_whitespace().collect())),
            None => parse_err(0, format!("missing {want} line")),
        }
    };
    let (no, toks) = header("header")?;
    if toks != ["hatgraph", "v1"] {
        return parse_err(no, "expected `hatgraph v1`");
    }
    let (no, toks) = header("mode")?;
    let mode = match toks.as_slice() {
        ["mode", "undirected"] => Mode::Undirected,
        ["mode", "directed"] => Mode::Directed,
        _ => return parse_err(no, "expected `mode undirected` or `mode directed`"),
    };
    let (no, toks) = header("vertex count")?;
    let n: usize = match toks.as_slice() {
        ["n", count] => field(Some(count), no, "vertex count")?,
        _ => return parse_err(no, "expected `n <count>`"),
    };
    let mut edges = Vec::new();
    for (no, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["e", u, v] => {
                let e = (field(Some(u), no, "vertex")?, field(Some(v), no, "vertex")?);
                if e.0 >= n || e.1 >= n {
                    return parse_err(no, format!("edge {e:?} out of range for n = {n}"));
                }
                edges.push(e);
            }
            _ => return parse_err(no, format!("unrecognized line `{l}`")),
        }
    }
    SightGraph::from_edges(mode, n, &edges)
}

pub fn write_graph(g: &SightGraph) -> String {
    let mut out = format!("hatgraph v1\nmode {}\nn {}\n", g.mode(), g.n());
    let edges: Vec<(usize, usize)> = match g.mode() {
        Mode::Undirected => g.edges(),
        Mode::Directed => (0..g.n())
            .flat_map(|u| g.sees(u).iter().map(move |&v| (u, v)))
            .collect(),
    };
    for (u, v) in edges {
        out += &format!("e {u} {v}\n");
    }
    out
}

/// A strategy as stored in a `hatstrat-v1` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyFile {
    Table(TableStrategy),
    Linear(LinearStrategy),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStrategy {
    format: String,
    kind: String,
    q: usize,
    vertices: Option<Vec<RawVertex>>,
    #[serde(rename = "A")]
    a: Option<Vec<Vec<Color>>>,
    b: Option<Vec<Color>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    id: usize,
    neighbors: Vec<usize>,
    table: HashMap<String, Color>,
}

/// Comma-joined decimal colors; the empty view is the empty string.
pub fn view_key(view: &[Color]) -> String {
    view.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn format_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Format(msg.into()))
}

/// Parses a `hatstrat-v1` document and checks table totality.
pub fn parse_strategy(text: &str) -> Result<StrategyFile> {
    let raw: RawStrategy = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if raw.format != STRATEGY_FORMAT {
        return format_err(format!("format `{}` is not {STRATEGY_FORMAT}", raw.format));
    }
    match raw.kind.as_str() {
        "table" => {
            if raw.a.is_some() || raw.b.is_some() {
                return format_err("table strategies carry no A or b");
            }
            let Some(mut vertices) = raw.vertices else {
                return format_err("table strategy without vertices");
            };
            vertices.sort_by_key(|v| v.id);
            if vertices.iter().enumerate().any(|(i, v)| v.id != i) {
                return format_err("vertex ids must be 0..n, each once");
            }
            let mut neighbors = Vec::with_capacity(vertices.len());
            let mut tables = Vec::with_capacity(vertices.len());
            for v in vertices {
                let size = raw.q.checked_pow(v.neighbors.len() as u32);
                if size != Some(v.table.len()) {
                    return format_err(format!(
                        "vertex {} has {} table entries, expected {}^{}",
                        v.id,
                        v.table.len(),
                        raw.q,
                        v.neighbors.len()
                    ));
                }
                let mut table = Vec::with_capacity(v.table.len());
                for view in all_words(v.neighbors.len(), raw.q) {
                    match v.table.get(&view_key(&view)) {
                        Some(&g) => table.push(g),
                        None => return format_err(format!("vertex {} lacks view `{}`", v.id, view_key(&view))),
                    }
                }
                neighbors.push(v.neighbors);
                tables.push(table);
            }
            Ok(StrategyFile::Table(TableStrategy::new(raw.q, neighbors, tables)?))
        }
        "linear" => {
            if raw.vertices.is_some() {
                return format_err("linear strategies carry no vertices");
            }
            let (Some(a), Some(b)) = (raw.a, raw.b) else {
                return format_err("linear strategy needs A and b");
            };
            Ok(StrategyFile::Linear(LinearStrategy::new(FieldSpec::new(raw.q)?, a, b)?))
        }
        other => format_err(format!("unknown strategy kind `{other}`")),
    }
}

struct TableMap<'a> {
    s: &'a TableStrategy,
    v: usize,
}

impl Serialize for TableMap<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let arity = self.s.neighbors(self.v).len();
        let mut map = ser.serialize_map(Some(self.s.table(self.v).len()))?;
        for (view, g) in all_words(arity, self.s.q()).zip(self.s.table(self.v)) {
            map.serialize_entry(&view_key(&view), g)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct TableVertexOut<'a> {
    id: usize,
    neighbors: &'a [usize],
    table: TableMap<'a>,
}

#[derive(Serialize)]
struct TableOut<'a> {
    format: &'static str,
    kind: &'static str,
    q: usize,
    vertices: Vec<TableVertexOut<'a>>,
}

#[derive(Serialize)]
struct LinearOut<'a> {
    format: &'static str,
    kind: &'static str,
    q: usize,
    #[serde(rename = "A")]
    a: &'a [Vec<Color>],
    b: &'a [Color],
}

/// Tables are written with views in lexicographic order.
pub fn write_table_strategy(s: &TableStrategy) -> String {
    let out = TableOut {
        format: STRATEGY_FORMAT,
        kind: "table",
        q: s.q(),
        vertices: (0..s.n())
            .map(|v| TableVertexOut {
                id: v,
                neighbors: s.neighbors(v),
                table: TableMap { s, v },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&out).expect("strategy serializes") + "\n"
}

pub fn write_linear_strategy(s: &LinearStrategy) -> String {
    let out = LinearOut {
        format: STRATEGY_FORMAT,
        kind: "linear",
        q: s.field().q(),
        a: s.a(),
        b: s.b(),
    };
    serde_json::to_string_pretty(&out).expect("strategy serializes") + "\n"
}

pub fn write_strategy(s: &StrategyFile) -> String {
    match s {
        StrategyFile::Table(t) => write_table_strategy(t),
        StrategyFile::Linear(l) => write_linear_strategy(l),
    }
}

/// Contents of a `satmat v1` file before any saturation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub rows: Vec<Vec<Color>>,
    pub q: usize,
    pub t: usize,
}

/// Parses a `satmat v1 <n> <l> <q> <t>` file; the claimed saturation level
/// is re-verified.
pub fn parse_matrix(text: &str) -> Result<SaturatedMatrix> {
    let m = parse_matrix_file(text)?;
    SaturatedMatrix::new(m.rows, m.q, m.t)
}

/// Parses a `satmat v1` file checking only its shape and entries.
pub fn parse_matrix_file(text: &str) -> Result<MatrixFile> {
    let mut lines = content_lines(text);
    let Some((no, head)) = lines.next() else {
        return parse_err(0, "empty matrix file");
    };
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.len() != 6 || toks[..2] != ["satmat", "v1"] {
        return parse_err(no, "expected `satmat v1 <n> <l> <q> <t>`");
    }
    let [n, l, q, t]: [usize; 4] = [
        field(Some(toks[2]), no, "row count")?,
        field(Some(toks[3]), no, "column count")?,
        field(Some(toks[4]), no, "alphabet size")?,
        field(Some(toks[5]), no, "saturation level")?,
    ];
    let mut rows = Vec::with_capacity(n);
    for (no, l_text) in lines {
        if rows.len() == n {
            return parse_err(no, "more rows than declared");
        }
        let row = l_text
            .split_whitespace()
            .map(|tok| match tok.parse::<Color>() {
                Ok(c) if (c as usize) < q => Ok(c),
                _ => parse_err(no, format!("entry `{tok}` not in 0..{q}")),
            })
            .collect::<Result<Vec<Color>>>()?;
        if row.len() != l {
            return parse_err(no, format!("row has {} entries, expected {l}", row.len()));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return parse_err(0, format!("found {} rows, expected {n}", rows.len()));
    }
    Ok(MatrixFile { rows, q, t })
}

pub fn write_matrix(m: &SaturatedMatrix) -> String {
    let mut out = format!("satmat v1 {} {} {} {}\n", m.n_rows(), m.n_cols(), m.q(), m.t());
    for row in m.rows() {
        out += &view_key(row).replace(',', " ");
        out.push('\n');
    }
    out
}

/// `verdict solvable|unsolvable|timeout nodes=<n> ms=<t>`.
pub fn verdict_line(v: &SolveVerdict) -> String {
    format!("verdict {} nodes={} ms={}", v.label(), v.nodes, v.elapsed.as_millis())
}
