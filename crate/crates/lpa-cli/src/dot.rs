//! DOT export: the multigraph itself, or the Hasse diagram of the prime
//! spectrum with classification annotations. Output ordering is fixed by
//! the canonical vertex/prime orders, so repeated runs are byte-identical.

use std::fmt::Write;

use lpa_core::graph::{Graph, Multiplicity};
use lpa_core::oracle::SpectrumPoset;
use lpa_core::spectrum::ClassificationReport;

pub fn graph_dot(g: &Graph) -> String {
    let mut out = String::from("digraph graph_view {\n  rankdir=LR;\n");
    for v in g.vertices() {
        writeln!(out, "  {:?};", v.as_str()).unwrap();
    }
    for e in g.edges() {
        let label = match e.mult {
            Multiplicity::Finite(1) => String::new(),
            Multiplicity::Finite(k) => format!(" [label=\"×{k}\"]"),
            Multiplicity::Omega => " [label=\"∞\"]".to_string(),
        };
        writeln!(
            out,
            "  {:?} -> {:?}{label};",
            e.source.as_str(),
            e.target.as_str()
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn flag(b: bool) -> char {
    if b {
        '✓'
    } else {
        '✗'
    }
}

/// Hasse diagram of the spectrum poset; `reports` must be keyed in poset
/// prime order.
pub fn spectrum_dot(poset: &SpectrumPoset, reports: &[&ClassificationReport]) -> String {
    let mut out = String::from("digraph spectrum {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, (p, r)) in poset.primes().iter().zip(reports).enumerate() {
        let desc = p.to_string().replace('\\', "\\\\").replace('"', "\\\"");
        let label = format!(
            "{desc}\\nprimitive {} strong {} loc-closed {}\\ncompl-irred {} rational {}",
            flag(r.primitive),
            flag(r.strongly_primitive),
            flag(r.locally_closed),
            flag(r.completely_irreducible),
            r.rationality,
        );
        writeln!(out, "  n{i} [label=\"{label}\"];").unwrap();
    }
    let mut edges = poset.hasse_edges();
    edges.sort();
    for (lo, hi) in edges {
        writeln!(out, "  n{lo} -> n{hi};").unwrap();
    }
    out.push_str("}\n");
    out
}
