//! Graph ingestion: a line-oriented text format and a JSON document format,
//! both mapping onto [`Graph`] with positioned errors.
//!
//! Text format, diff-friendly:
//! ```text
//! # comment
//! vertex u v w
//! edge u v        # multiplicity 1
//! edge w h inf    # ω
//! edge v w 2
//! ```
//! Duplicate `(source, target)` lines aggregate multiplicities (finite
//! values sum; anything plus `inf` is `inf`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use lpa_core::graph::{EdgeId, EdgeSpec, Graph, Multiplicity, VertexId};

#[derive(Debug)]
pub struct ParseError {
    pub position: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(position: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError {
        position: position.into(),
        message: message.into(),
    }
}

/// The structured (machine) graph document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub source: String,
    pub target: String,
    #[serde(default = "one")]
    pub mult: Multiplicity,
}

fn one() -> Multiplicity {
    Multiplicity::ONE
}

/// Parses either format: documents whose first non-blank byte is `{` are
/// treated as structured JSON, everything else as the text format.
pub fn parse_graph(input: &str) -> Result<Graph, ParseError> {
    if input.trim_start().starts_with('{') {
        parse_structured(input)
    } else {
        parse_text(input)
    }
}

fn parse_mult(token: &str, position: &str) -> Result<Multiplicity, ParseError> {
    if token == "inf" {
        return Ok(Multiplicity::Omega);
    }
    let value: u64 = token
        .parse()
        .map_err(|_| err(position, format!("bad multiplicity token {token:?}")))?;
    Multiplicity::finite(value).map_err(|_| err(position, "multiplicity must be positive"))
}

fn parse_text(input: &str) -> Result<Graph, ParseError> {
    let mut vertices: Vec<VertexId> = Vec::new();
    // (source, target) -> (first-occurrence order, aggregated multiplicity)
    let mut agg: BTreeMap<(VertexId, VertexId), (usize, Multiplicity)> = BTreeMap::new();
    let mut next_edge = 0usize;

    for (i, raw) in input.lines().enumerate() {
        let position = format!("line {}", i + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("vertex") => {
                let names: Vec<&str> = tokens.collect();
                if names.is_empty() {
                    return Err(err(position, "vertex line declares no names"));
                }
                for name in names {
                    let v = VertexId::new(name);
                    if vertices.contains(&v) {
                        return Err(err(position, format!("duplicate vertex {name:?}")));
                    }
                    vertices.push(v);
                }
            }
            Some("edge") => {
                let src = tokens
                    .next()
                    .ok_or_else(|| err(&position, "edge line needs a source"))?;
                let dst = tokens
                    .next()
                    .ok_or_else(|| err(&position, "edge line needs a target"))?;
                let mult = match tokens.next() {
                    Some(tok) => parse_mult(tok, &position)?,
                    None => Multiplicity::ONE,
                };
                if let Some(extra) = tokens.next() {
                    return Err(err(position, format!("unexpected token {extra:?}")));
                }
                let src = VertexId::new(src);
                let dst = VertexId::new(dst);
                for v in [&src, &dst] {
                    if !vertices.contains(v) {
                        return Err(err(
                            position,
                            format!(
                                "unknown vertex {:?} (declare it with a vertex line first)",
                                v.as_str()
                            ),
                        ));
                    }
                }
                agg.entry((src, dst))
                    .and_modify(|(_, m)| *m = m.plus(mult))
                    .or_insert_with(|| {
                        let slot = next_edge;
                        next_edge += 1;
                        (slot, mult)
                    });
            }
            Some(other) => {
                return Err(err(position, format!("unknown directive {other:?}")));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }

    if vertices.is_empty() {
        return Err(err("input", "empty vertex set"));
    }
    let mut ordered: Vec<(usize, VertexId, VertexId, Multiplicity)> = agg
        .into_iter()
        .map(|((s, t), (slot, m))| (slot, s, t, m))
        .collect();
    ordered.sort_by_key(|(slot, ..)| *slot);
    let edges = ordered
        .into_iter()
        .enumerate()
        .map(|(k, (_, source, target, mult))| EdgeSpec {
            id: EdgeId::new(format!("e{k}")),
            source,
            target,
            mult,
        })
        .collect();
    Graph::new(vertices, edges).map_err(|e| err("input", e.to_string()))
}

fn parse_structured(input: &str) -> Result<Graph, ParseError> {
    let doc: GraphDocument = serde_json::from_str(input).map_err(|e| {
        err(
            format!("json (line {}, column {})", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let vertices: Vec<VertexId> = doc.vertices.iter().map(VertexId::new).collect();
    let mut agg: BTreeMap<(VertexId, VertexId), (usize, Multiplicity)> = BTreeMap::new();
    let mut next_edge = 0usize;
    for (k, e) in doc.edges.iter().enumerate() {
        let src = VertexId::new(&e.source);
        let dst = VertexId::new(&e.target);
        for v in [&src, &dst] {
            if !vertices.contains(v) {
                return Err(err(
                    format!("edges[{k}]"),
                    format!("unknown vertex {:?}", v.as_str()),
                ));
            }
        }
        agg.entry((src, dst))
            .and_modify(|(_, m)| *m = m.plus(e.mult))
            .or_insert_with(|| {
                let slot = next_edge;
                next_edge += 1;
                (slot, e.mult)
            });
    }
    if vertices.is_empty() {
        return Err(err("input", "empty vertex set"));
    }
    let mut ordered: Vec<(usize, VertexId, VertexId, Multiplicity)> = agg
        .into_iter()
        .map(|((s, t), (slot, m))| (slot, s, t, m))
        .collect();
    ordered.sort_by_key(|(slot, ..)| *slot);
    let edges = ordered
        .into_iter()
        .enumerate()
        .map(|(k, (_, source, target, mult))| EdgeSpec {
            id: EdgeId::new(format!("e{k}")),
            source,
            target,
            mult,
        })
        .collect();
    Graph::new(vertices, edges).map_err(|e| err("input", e.to_string()))
}

/// Canonical text form: one `vertex` line, then aggregated `edge` lines in
/// edge order. `parse_graph(graph_to_text(g))` rebuilds `g` up to edge ids.
pub fn graph_to_text(g: &Graph) -> String {
    let mut out = String::from("vertex");
    for v in g.vertices() {
        out.push(' ');
        out.push_str(v.as_str());
    }
    out.push('\n');
    for e in g.edges() {
        out.push_str(&format!("edge {} {}", e.source, e.target));
        if e.mult != Multiplicity::ONE {
            out.push_str(&format!(" {}", e.mult));
        }
        out.push('\n');
    }
    out
}

/// Canonical structured form.
pub fn graph_to_document(g: &Graph) -> GraphDocument {
    GraphDocument {
        vertices: g.vertices().iter().map(|v| v.as_str().to_owned()).collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeEntry {
                source: e.source.as_str().to_owned(),
                target: e.target.as_str().to_owned(),
                mult: e.mult,
            })
            .collect(),
    }
}
