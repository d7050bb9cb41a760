//! Lazily generated infinite graphs with finite windows, and
//! machine-checkable witness certificates for claims about them.
//!
//! Infinite graphs are never materialized. A [`GeneratedGraph`] describes
//! vertices and out-edges by rule; analyses materialize nested finite
//! windows or check witness obligations directly against the rules. A
//! `Verified` verdict always means "every finite obligation passed on the
//! requested windows" — it is window-checked evidence, not a proof, and the
//! reports say so.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{simple_cycles, CycleError};
use crate::graph::{
    EdgeId, EdgeSpec, Graph, GraphError, Multiplicity, VertexId, VertexKind, VertexSet,
};
use crate::spectrum::{Cardinality, FieldDesc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("window index must be at least 1")]
    BadWindow,
    #[error("at least one window is required")]
    NoWindows,
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

/// A countable graph presented by rule: nested finite vertex windows that
/// exhaust the vertex set, an out-edge description per vertex (finitely
/// many explicit targets, plus an optional "infinitely many further
/// targets" marker with a membership predicate), and a declared vertex
/// kind.
pub trait GeneratedGraph {
    type V: Clone + Ord + fmt::Display;

    fn name(&self) -> &str;

    /// The window `W_m`, `m ≥ 1`. Windows must be nested and exhaust the
    /// vertex set in the limit; nesting is checked per window.
    fn window_vertices(&self, m: u32) -> Vec<Self::V>;

    /// Explicit finite targets with multiplicities.
    fn finite_targets(&self, v: &Self::V) -> Vec<(Self::V, Multiplicity)>;

    /// Marker: `v` has infinitely many further targets.
    fn has_cofinite_targets(&self, v: &Self::V) -> bool;

    /// Membership predicate for the marker's targets.
    fn cofinite_target_contains(&self, v: &Self::V, t: &Self::V) -> bool;

    /// Declared kind of `v`.
    fn kind_override(&self, v: &Self::V) -> VertexKind;

    /// Is `v` a vertex of the (infinite) graph at all?
    fn is_vertex(&self, v: &Self::V) -> bool;

    /// The least window index containing `v`; locates witnesses inside a
    /// declared window.
    fn min_window(&self, v: &Self::V) -> u32;

    fn has_edge(&self, u: &Self::V, v: &Self::V) -> bool {
        self.finite_targets(u).iter().any(|(t, _)| t == v)
            || (self.has_cofinite_targets(u) && self.cofinite_target_contains(u, v))
    }

    /// Does the declared kind agree with the out-edge description?
    fn kind_consistent(&self, v: &Self::V) -> bool {
        let finite = self.finite_targets(v);
        let declared = self.kind_override(v);
        let described = if self.has_cofinite_targets(v) || finite.iter().any(|(_, m)| m.is_omega())
        {
            VertexKind::InfiniteEmitter
        } else if finite.is_empty() {
            VertexKind::Sink
        } else {
            VertexKind::Regular
        };
        declared == described
    }
}

/// A materialized finite window: edges whose targets fall outside the
/// window are dropped and their sources marked boundary. Classification
/// claims on a window are only meaningful for non-boundary-sensitive
/// predicates.
#[derive(Debug, Clone)]
pub struct Window {
    pub index: u32,
    pub graph: Graph,
    pub boundary: VertexSet,
}

pub fn window<G: GeneratedGraph>(gg: &G, m: u32) -> Result<Window, CertError> {
    if m < 1 {
        return Err(CertError::BadWindow);
    }
    let mut verts = gg.window_vertices(m);
    verts.sort();
    verts.dedup();
    let inside: BTreeSet<G::V> = verts.iter().cloned().collect();

    let vertex_ids: Vec<VertexId> = verts.iter().map(|v| VertexId::new(v.to_string())).collect();
    let mut edges = Vec::new();
    let mut boundary = VertexSet::new();
    for v in &verts {
        let vid = VertexId::new(v.to_string());
        for (t, mult) in gg.finite_targets(v) {
            if inside.contains(&t) {
                let id = EdgeId::new(format!("e{}", edges.len()));
                edges.push(EdgeSpec {
                    id,
                    source: vid.clone(),
                    target: VertexId::new(t.to_string()),
                    mult,
                });
            } else {
                boundary.insert(vid.clone());
            }
        }
        if gg.has_cofinite_targets(v) {
            // infinitely many targets can never fit in a finite window
            boundary.insert(vid.clone());
            for t in &verts {
                if gg.cofinite_target_contains(v, t) {
                    let id = EdgeId::new(format!("e{}", edges.len()));
                    edges.push(EdgeSpec {
                        id,
                        source: vid.clone(),
                        target: VertexId::new(t.to_string()),
                        mult: Multiplicity::ONE,
                    });
                }
            }
        }
    }
    Ok(Window {
        index: m,
        graph: Graph::new(vertex_ids, edges)?,
        boundary,
    })
}

/// Witness that two vertices meet below: `u ≥ meet` and `v ≥ meet` along
/// the given vertex paths (endpoints included; a single-vertex path is the
/// empty path).
pub struct DirectednessWitness<V> {
    pub meet: V,
    pub path_from_first: Vec<V>,
    pub path_from_second: Vec<V>,
}

pub struct CspWitness<V> {
    pub target: V,
    pub path: Vec<V>,
}

/// Membership predicate for an indexed family of vertex sets.
pub type FamilyPredicate<'a, V, I> = Box<dyn Fn(&I, &V) -> bool + 'a>;
/// Per-vertex predicate.
pub type VertexPredicate<'a, V> = Box<dyn Fn(&V) -> bool + 'a>;
/// Witness function mapping a vertex pair to a meet with explicit paths.
pub type MeetWitnessFn<'a, V> = Box<dyn Fn(&V, &V) -> DirectednessWitness<V> + 'a>;
/// Witness function mapping a vertex to a separating target with a path.
pub type CspWitnessFn<'a, V> = Box<dyn Fn(&V) -> CspWitness<V> + 'a>;
/// Witness function mapping an excluded (index, vertex) to a larger index.
pub type ChainWitnessFn<'a, V, I> = Box<dyn Fn(&I, &V) -> I + 'a>;

/// Machine-checkable witness data for one claim about a generated graph.
/// `V` is the vertex type, `I` the family/chain index type.
pub enum Certificate<'a, V, I> {
    /// A family `{H_n}` of non-empty hereditary saturated sets whose
    /// intersection is empty: per window, every realized `H_n` must be
    /// hereditary and saturated inside the window and inhabited via
    /// `member_witness`, and `exclusion_index(v)` must name an `n` with
    /// `v ∉ H_n` for every window vertex.
    HsFamilyEmptyIntersection {
        in_family: FamilyPredicate<'a, V, I>,
        exclusion_index: Box<dyn Fn(&V) -> I + 'a>,
        member_witness: Box<dyn Fn(&I) -> V + 'a>,
    },
    /// Downward directedness of the vertex set (or of the sub-domain when
    /// `domain` is given): every pair of window vertices meets below via
    /// explicit paths, checked against the edge rules.
    DownwardDirected {
        domain: Option<VertexPredicate<'a, V>>,
        witness: MeetWitnessFn<'a, V>,
    },
    /// Countable separation: every window vertex reaches the declared
    /// countable set along an explicit path.
    Csp {
        in_separating_set: VertexPredicate<'a, V>,
        witness: CspWitnessFn<'a, V>,
    },
    /// The chain pattern `H_i = ⋂_{j>i} H_j`: for each checked index `i`
    /// and window vertex `v ∉ H_i`, the witness names `j > i` with
    /// `v ∉ H_j`; the family must be monotone on the window.
    GradedPrimeChain {
        indices_for_window: Box<dyn Fn(u32) -> Vec<I> + 'a>,
        in_ideal: FamilyPredicate<'a, V, I>,
        chain_witness: ChainWitnessFn<'a, V, I>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Verified,
    Refuted(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => f.write_str("verified"),
            Verdict::Refuted(why) => write!(f, "refuted: {why}"),
            Verdict::Inconclusive(why) => write!(f, "inconclusive: {why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateOutcome {
    pub verdict: Verdict,
    pub obligations: u64,
}

fn check_path<G: GeneratedGraph>(
    gg: &G,
    path: &[G::V],
    from: &G::V,
    to: &G::V,
) -> Result<Option<String>, CertError> {
    if path.is_empty() {
        return Err(CertError::Malformed("empty witness path".into()));
    }
    if path.first() != Some(from) {
        return Ok(Some(format!("path does not start at {from}")));
    }
    if path.last() != Some(to) {
        return Ok(Some(format!("path does not end at {to}")));
    }
    for v in path {
        if !gg.is_vertex(v) {
            return Ok(Some(format!("{v} is not a vertex")));
        }
    }
    for pair in path.windows(2) {
        if !gg.has_edge(&pair[0], &pair[1]) {
            return Ok(Some(format!("no edge {} → {}", pair[0], pair[1])));
        }
    }
    Ok(None)
}

/// Checks every local obligation of `cert` on every requested window.
/// `Verified` means all obligations passed — window-checked evidence, not
/// a proof. Any failed obligation refutes with a counterexample.
pub fn verify_certificate<G, I>(
    gg: &G,
    cert: &Certificate<G::V, I>,
    windows: &[u32],
) -> Result<CertificateOutcome, CertError>
where
    G: GeneratedGraph,
    I: Clone + Ord + fmt::Display,
{
    if windows.is_empty() {
        return Err(CertError::NoWindows);
    }
    let mut obligations: u64 = 0;
    let refute = |msg: String| -> Verdict { Verdict::Refuted(msg) };

    for &m in windows {
        if m < 1 {
            return Err(CertError::BadWindow);
        }
        let mut verts = gg.window_vertices(m);
        verts.sort();
        verts.dedup();
        let inside: BTreeSet<G::V> = verts.iter().cloned().collect();

        match cert {
            Certificate::HsFamilyEmptyIntersection {
                in_family,
                exclusion_index,
                member_witness,
            } => {
                // exclusion witnesses and the realized index set
                let mut indices = BTreeSet::new();
                for v in &verts {
                    let n = exclusion_index(v);
                    obligations += 1;
                    if in_family(&n, v) {
                        return Ok(CertificateOutcome {
                            verdict: refute(format!(
                                "W_{m}: exclusion witness {n} fails, {v} ∈ H_{n}"
                            )),
                            obligations,
                        });
                    }
                    indices.insert(n);
                }
                for n in &indices {
                    // the family member must be inhabited ...
                    let w = member_witness(n);
                    obligations += 1;
                    if !gg.is_vertex(&w) || !in_family(n, &w) {
                        return Ok(CertificateOutcome {
                            verdict: refute(format!("W_{m}: member witness for H_{n} is invalid")),
                            obligations,
                        });
                    }
                    // ... hereditary inside the window ...
                    for u in &verts {
                        if !in_family(n, u) {
                            continue;
                        }
                        for (t, _) in gg.finite_targets(u) {
                            if inside.contains(&t) {
                                obligations += 1;
                                if !in_family(n, &t) {
                                    return Ok(CertificateOutcome {
                                        verdict: refute(format!(
                                            "W_{m}: H_{n} not hereditary, edge {u} → {t} leaves it"
                                        )),
                                        obligations,
                                    });
                                }
                            }
                        }
                        if gg.has_cofinite_targets(u) {
                            for t in &verts {
                                if gg.cofinite_target_contains(u, t) {
                                    obligations += 1;
                                    if !in_family(n, t) {
                                        return Ok(CertificateOutcome {
                                            verdict: refute(format!(
                                                "W_{m}: H_{n} not hereditary, edge {u} → {t} leaves it"
                                            )),
                                            obligations,
                                        });
                                    }
                                }
                            }
                        }
                    }
                    // ... and saturated for regular non-boundary vertices
                    // (boundary vertices have truncated edge sets, exempt).
                    for u in &verts {
                        if gg.kind_override(u) != VertexKind::Regular || gg.has_cofinite_targets(u)
                        {
                            continue;
                        }
                        let targets = gg.finite_targets(u);
                        if targets.iter().any(|(t, _)| !inside.contains(t)) {
                            continue; // boundary
                        }
                        obligations += 1;
                        if targets.iter().all(|(t, _)| in_family(n, t)) && !in_family(n, u) {
                            return Ok(CertificateOutcome {
                                verdict: refute(format!(
                                    "W_{m}: H_{n} not saturated at regular vertex {u}"
                                )),
                                obligations,
                            });
                        }
                    }
                }
                // declared kinds must match the edge descriptions
                for v in &verts {
                    obligations += 1;
                    if !gg.kind_consistent(v) {
                        return Ok(CertificateOutcome {
                            verdict: refute(format!(
                                "W_{m}: declared kind of {v} contradicts its out-edges"
                            )),
                            obligations,
                        });
                    }
                }
            }
            Certificate::DownwardDirected { domain, witness } => {
                let in_domain = |v: &G::V| domain.as_ref().map(|d| d(v)).unwrap_or(true);
                let dom: Vec<&G::V> = verts.iter().filter(|v| in_domain(v)).collect();
                for (i, u) in dom.iter().enumerate() {
                    for v in &dom[i..] {
                        let w = witness(u, v);
                        obligations += 1;
                        if !gg.is_vertex(&w.meet) || !in_domain(&w.meet) {
                            return Ok(CertificateOutcome {
                                verdict: refute(format!(
                                    "W_{m}: meet witness {} for ({u},{v}) is outside the domain",
                                    w.meet
                                )),
                                obligations,
                            });
                        }
                        for (path, from) in [(&w.path_from_first, *u), (&w.path_from_second, *v)] {
                            if let Some(err) = check_path(gg, path, from, &w.meet)? {
                                return Ok(CertificateOutcome {
                                    verdict: refute(format!("W_{m}: ({u},{v}): {err}")),
                                    obligations,
                                });
                            }
                        }
                    }
                }
            }
            Certificate::Csp {
                in_separating_set,
                witness,
            } => {
                for v in &verts {
                    let w = witness(v);
                    obligations += 1;
                    if !in_separating_set(&w.target) {
                        return Ok(CertificateOutcome {
                            verdict: refute(format!(
                                "W_{m}: witness target {} for {v} is outside S",
                                w.target
                            )),
                            obligations,
                        });
                    }
                    if let Some(err) = check_path(gg, &w.path, v, &w.target)? {
                        return Ok(CertificateOutcome {
                            verdict: refute(format!("W_{m}: {v}: {err}")),
                            obligations,
                        });
                    }
                }
            }
            Certificate::GradedPrimeChain {
                indices_for_window,
                in_ideal,
                chain_witness,
            } => {
                let mut indices = indices_for_window(m);
                indices.sort();
                indices.dedup();
                if indices.is_empty() {
                    continue;
                }
                for i in &indices {
                    for v in &verts {
                        if in_ideal(i, v) {
                            continue;
                        }
                        let j = chain_witness(i, v);
                        obligations += 1;
                        if j <= *i {
                            return Ok(CertificateOutcome {
                                verdict: refute(format!(
                                    "W_{m}: chain witness {j} for ({i},{v}) is not above {i}"
                                )),
                                obligations,
                            });
                        }
                        if in_ideal(&j, v) {
                            return Ok(CertificateOutcome {
                                verdict: refute(format!(
                                    "W_{m}: {v} ∈ H_{j}, chain witness fails for i={i}"
                                )),
                                obligations,
                            });
                        }
                    }
                }
                // the family must be monotone for the chain to make sense
                for (a, i) in indices.iter().enumerate() {
                    for j in &indices[a + 1..] {
                        for v in &verts {
                            obligations += 1;
                            if in_ideal(i, v) && !in_ideal(j, v) {
                                return Ok(CertificateOutcome {
                                    verdict: refute(format!(
                                        "W_{m}: family not monotone, {v} ∈ H_{i} ∖ H_{j}"
                                    )),
                                    obligations,
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    if obligations == 0 {
        return Ok(CertificateOutcome {
            verdict: Verdict::Inconclusive("no obligations could be checked".into()),
            obligations,
        });
    }
    Ok(CertificateOutcome {
        verdict: Verdict::Verified,
        obligations,
    })
}

/// Window nesting obligation `W_m ⊆ W_{m+1}`, checked per requested window.
pub fn check_nesting<G: GeneratedGraph>(gg: &G, windows: &[u32]) -> (Verdict, u64) {
    let mut obligations = 0;
    for &m in windows {
        let next: BTreeSet<G::V> = gg.window_vertices(m + 1).into_iter().collect();
        for v in gg.window_vertices(m) {
            obligations += 1;
            if !next.contains(&v) {
                return (
                    Verdict::Refuted(format!("{v} ∈ W_{m} but not in W_{}", m + 1)),
                    obligations,
                );
            }
        }
    }
    (Verdict::Verified, obligations)
}

// ---------------------------------------------------------------------------
// Built-in generated graphs
// ---------------------------------------------------------------------------

/// Vertex of the ℕ×ℕ lattice graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticeVertex(pub u64, pub u64);

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// The ℕ×ℕ lattice: every vertex `(m,n)` emits two edges, to `(m+1,n)` and
/// `(m,n+1)`. Acyclic, downward directed (everything flows up-right — and
/// any two vertices reach the coordinate-wise maximum), countable.
pub struct LatticeGraph;

impl GeneratedGraph for LatticeGraph {
    type V = LatticeVertex;

    fn name(&self) -> &str {
        "lattice"
    }

    fn window_vertices(&self, m: u32) -> Vec<LatticeVertex> {
        let m = m as u64;
        let mut out = Vec::new();
        for i in 0..=m {
            for j in 0..=m {
                out.push(LatticeVertex(i, j));
            }
        }
        out
    }

    fn finite_targets(&self, v: &LatticeVertex) -> Vec<(LatticeVertex, Multiplicity)> {
        vec![
            (LatticeVertex(v.0 + 1, v.1), Multiplicity::ONE),
            (LatticeVertex(v.0, v.1 + 1), Multiplicity::ONE),
        ]
    }

    fn has_cofinite_targets(&self, _v: &LatticeVertex) -> bool {
        false
    }

    fn cofinite_target_contains(&self, _v: &LatticeVertex, _t: &LatticeVertex) -> bool {
        false
    }

    fn kind_override(&self, _v: &LatticeVertex) -> VertexKind {
        VertexKind::Regular
    }

    fn is_vertex(&self, _v: &LatticeVertex) -> bool {
        true
    }

    fn min_window(&self, v: &LatticeVertex) -> u32 {
        (v.0.max(v.1).max(1)) as u32
    }
}

/// Monotone right-then-up staircase path between lattice vertices.
fn lattice_path(from: LatticeVertex, to: LatticeVertex) -> Vec<LatticeVertex> {
    let mut path = vec![from];
    let mut cur = from;
    while cur.0 < to.0 {
        cur = LatticeVertex(cur.0 + 1, cur.1);
        path.push(cur);
    }
    while cur.1 < to.1 {
        cur = LatticeVertex(cur.0, cur.1 + 1);
        path.push(cur);
    }
    path
}

/// The family `H_n = {(i,j) : j ≥ n}` with exclusion witness `n(v) = j+1`:
/// non-empty hereditary saturated sets with empty intersection.
pub fn lattice_family_certificate<'a>() -> Certificate<'a, LatticeVertex, u64> {
    Certificate::HsFamilyEmptyIntersection {
        in_family: Box::new(|n, v| v.1 >= *n),
        exclusion_index: Box::new(|v| v.1 + 1),
        member_witness: Box::new(|n| LatticeVertex(0, *n)),
    }
}

/// Downward directedness via the coordinate-wise maximum and staircase
/// paths.
pub fn lattice_downward_certificate<'a>() -> Certificate<'a, LatticeVertex, u64> {
    Certificate::DownwardDirected {
        domain: None,
        witness: Box::new(|u, v| {
            let meet = LatticeVertex(u.0.max(v.0), u.1.max(v.1));
            DirectednessWitness {
                meet,
                path_from_first: lattice_path(*u, meet),
                path_from_second: lattice_path(*v, meet),
            }
        }),
    }
}

/// CSP with respect to `S = {(m,n) : m ≥ 1, n ≥ 1}`.
pub fn lattice_csp_certificate<'a>() -> Certificate<'a, LatticeVertex, u64> {
    Certificate::Csp {
        in_separating_set: Box::new(|v| v.0 >= 1 && v.1 >= 1),
        witness: Box::new(|v| {
            let target = LatticeVertex(v.0.max(1), v.1.max(1));
            CspWitness {
                target,
                path: lattice_path(*v, target),
            }
        }),
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckLine {
    pub claim: String,
    pub verdict: Verdict,
    pub obligations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConclusionStatus {
    Certified,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Conclusion {
    pub statement: String,
    pub status: ConclusionStatus,
    pub basis: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExampleReport {
    pub example: String,
    pub windows: Vec<u32>,
    pub field: Option<FieldDesc>,
    pub checks: Vec<CheckLine>,
    pub conclusions: Vec<Conclusion>,
    pub caveat: String,
}

impl ExampleReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.is_verified())
    }
}

const CAVEAT: &str = "verified = every finite obligation passed on the requested windows; \
window-checked evidence, not a proof";

/// Certifies that the zero ideal of the lattice graph is primitive
/// (acyclic windows + downward directedness + CSP) and refutes strong
/// primitivity via the `H_n` family certificate.
pub fn lattice_example_report(windows: &[u32]) -> Result<ExampleReport, CertError> {
    lattice_example_report_with(windows, lattice_family_certificate())
}

/// Same report with a caller-supplied family certificate, so tampered
/// witnesses can be fed through the full pipeline.
pub fn lattice_example_report_with(
    windows: &[u32],
    family_cert: Certificate<LatticeVertex, u64>,
) -> Result<ExampleReport, CertError> {
    if windows.is_empty() {
        return Err(CertError::NoWindows);
    }
    let gg = LatticeGraph;
    let mut checks = Vec::new();

    let (nesting, obligations) = check_nesting(&gg, windows);
    checks.push(CheckLine {
        claim: "windows are nested (W_m ⊆ W_{m+1})".into(),
        verdict: nesting,
        obligations,
    });

    // acyclicity, window by window
    let mut acyclic = Verdict::Verified;
    let mut cycle_obligations = 0;
    for &m in windows {
        let w = window(&gg, m)?;
        cycle_obligations += 1;
        let cycles = simple_cycles(&w.graph);
        if !cycles.is_empty() {
            acyclic = Verdict::Refuted(format!("W_{m} contains cycle {}", cycles[0]));
            break;
        }
    }
    checks.push(CheckLine {
        claim: "windows contain no cycles (Condition (L) holds vacuously)".into(),
        verdict: acyclic,
        obligations: cycle_obligations,
    });

    let downward = verify_certificate(&gg, &lattice_downward_certificate(), windows)?;
    checks.push(CheckLine {
        claim: "vertex set is downward directed (witnessed meets)".into(),
        verdict: downward.verdict,
        obligations: downward.obligations,
    });

    let csp = verify_certificate(&gg, &lattice_csp_certificate(), windows)?;
    checks.push(CheckLine {
        claim: "CSP with respect to S = {(m,n) : m,n ≥ 1}".into(),
        verdict: csp.verdict,
        obligations: csp.obligations,
    });

    let family = verify_certificate(&gg, &family_cert, windows)?;
    checks.push(CheckLine {
        claim: "H_n = {(i,j) : j ≥ n} is a family of non-empty hereditary saturated sets excluding every vertex (witness n(v) = j+1)".into(),
        verdict: family.verdict.clone(),
        obligations: family.obligations,
    });

    let primitivity_inputs = &checks[..4];
    let primitive_ok = primitivity_inputs.iter().all(|c| c.verdict.is_verified());
    let mut conclusions = vec![Conclusion {
        statement: "the zero ideal is primitive".into(),
        status: if primitive_ok {
            ConclusionStatus::Certified
        } else {
            ConclusionStatus::Inconclusive
        },
        basis: "downward directed + Condition (L) + CSP on every checked window".into(),
    }];
    let (strong_status, lc_status) = if family.verdict.is_verified() {
        (ConclusionStatus::Refuted, ConclusionStatus::Refuted)
    } else {
        (
            ConclusionStatus::Inconclusive,
            ConclusionStatus::Inconclusive,
        )
    };
    conclusions.push(Conclusion {
        statement: "the zero ideal is strongly primitive".into(),
        status: strong_status,
        basis: "any separating set would lie in every verified H_n, but the exclusion \
                witnesses leave the family's intersection empty"
            .into(),
    });
    conclusions.push(Conclusion {
        statement: "the zero ideal is locally closed".into(),
        status: lc_status,
        basis: "locally closed is equivalent to strongly primitive".into(),
    });

    Ok(ExampleReport {
        example: "lattice".into(),
        windows: windows.to_vec(),
        field: None,
        checks,
        conclusions,
        caveat: CAVEAT.into(),
    })
}

// ---------------------------------------------------------------------------
// The rational plane graph
// ---------------------------------------------------------------------------

pub type Rat = Ratio<i64>;

/// Vertex of the ℚ² graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlaneVertex(pub Rat, pub Rat);

impl fmt::Display for PlaneVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// The ℚ² graph: an edge `(i,j) → (r,s)` whenever `i > r`, or `i = r` and
/// `j > s` — the strict lexicographic order going down. Every vertex is an
/// infinite emitter. Windows `W_m` take both coordinates from the rationals
/// with denominator ≤ m and magnitude ≤ m.
pub struct RationalPlaneGraph;

impl RationalPlaneGraph {
    pub fn axis(m: u32) -> Vec<Rat> {
        let m = m as i64;
        let mut out = BTreeSet::new();
        for q in 1..=m {
            for p in -(m * q)..=(m * q) {
                out.insert(Ratio::new(p, q));
            }
        }
        out.into_iter().collect()
    }

    fn edge_rule(u: &PlaneVertex, t: &PlaneVertex) -> bool {
        u.0 > t.0 || (u.0 == t.0 && u.1 > t.1)
    }
}

impl GeneratedGraph for RationalPlaneGraph {
    type V = PlaneVertex;

    fn name(&self) -> &str {
        "rational-plane"
    }

    fn window_vertices(&self, m: u32) -> Vec<PlaneVertex> {
        let axis = Self::axis(m);
        let mut out = Vec::with_capacity(axis.len() * axis.len());
        for x in &axis {
            for y in &axis {
                out.push(PlaneVertex(*x, *y));
            }
        }
        out
    }

    fn finite_targets(&self, _v: &PlaneVertex) -> Vec<(PlaneVertex, Multiplicity)> {
        Vec::new()
    }

    fn has_cofinite_targets(&self, _v: &PlaneVertex) -> bool {
        true
    }

    fn cofinite_target_contains(&self, v: &PlaneVertex, t: &PlaneVertex) -> bool {
        Self::edge_rule(v, t)
    }

    fn kind_override(&self, _v: &PlaneVertex) -> VertexKind {
        VertexKind::InfiniteEmitter
    }

    fn is_vertex(&self, _v: &PlaneVertex) -> bool {
        true
    }

    fn min_window(&self, v: &PlaneVertex) -> u32 {
        let coord = |x: &Rat| -> u32 {
            let denom = *x.denom();
            let mag = (x.numer().abs() + denom - 1) / denom; // ceil(|x|)
            denom.max(mag).max(1) as u32
        };
        coord(&v.0).max(coord(&v.1))
    }
}

/// Downward directedness of `E⁰ ∖ H_i` for the plane: the witness for
/// `(a,b),(c,d)` is `(min(a,c), r)` with `r = min(b,d) − 1`, reached by
/// single edges from both.
pub fn plane_downward_certificate<'a>(i: Rat) -> Certificate<'a, PlaneVertex, Rat> {
    Certificate::DownwardDirected {
        domain: Some(Box::new(move |v| v.0 > i)),
        witness: Box::new(|u, v| {
            let meet = PlaneVertex(u.0.min(v.0), u.1.min(v.1) - Ratio::from_integer(1));
            DirectednessWitness {
                meet,
                path_from_first: vec![*u, meet],
                path_from_second: vec![*v, meet],
            }
        }),
    }
}

/// The chain certificate `P_i = ⋂_{j>i} P_j` over `H_i = {(x,y) : x ≤ i}`,
/// with witness `j = (i + x)/2` for a vertex with first coordinate `x > i`.
pub fn plane_chain_certificate<'a>() -> Certificate<'a, PlaneVertex, Rat> {
    Certificate::GradedPrimeChain {
        indices_for_window: Box::new(RationalPlaneGraph::axis),
        in_ideal: Box::new(|i, v| v.0 <= *i),
        chain_witness: Box::new(|i, v| (*i + v.0) / Ratio::from_integer(2)),
    }
}

/// Window report for the ℚ² example: each `H_i` is hereditary and vacuously
/// saturated, each complement is downward directed, the chain certificate
/// shows `P_i` is not locally closed, and over an uncountable field each
/// `P_i` is rational (acyclic graph, countably many vertices and edge
/// rules). Obligations are checked in fused single passes per window so the
/// quadratic pair scans stay affordable.
pub fn rational_plane_report(
    windows: &[u32],
    field: &FieldDesc,
) -> Result<ExampleReport, CertError> {
    if windows.is_empty() {
        return Err(CertError::NoWindows);
    }
    let gg = RationalPlaneGraph;
    let mut checks = Vec::new();

    let (nesting, obligations) = check_nesting(&gg, windows);
    checks.push(CheckLine {
        claim: "windows are nested (W_m ⊆ W_{m+1})".into(),
        verdict: nesting,
        obligations,
    });

    // fused per-window pair scans
    let mut kind_verdict = Verdict::Verified;
    let mut kind_obligations = 0u64;
    let mut hereditary_verdict = Verdict::Verified;
    let mut hereditary_obligations = 0u64;
    let mut order_verdict = Verdict::Verified;
    let mut order_obligations = 0u64;
    let mut downward_verdict = Verdict::Verified;
    let mut downward_obligations = 0u64;

    for &m in windows {
        if m < 1 {
            return Err(CertError::BadWindow);
        }
        let axis = RationalPlaneGraph::axis(m);
        let verts = gg.window_vertices(m);

        for v in &verts {
            kind_obligations += 1;
            if gg.kind_override(v) != VertexKind::InfiniteEmitter || !gg.kind_consistent(v) {
                kind_verdict =
                    Verdict::Refuted(format!("W_{m}: {v} is not a declared infinite emitter"));
            }
        }

        // count of checked indices at or above x, for obligation accounting
        let indices_geq =
            |x: &Rat| -> u64 { (axis.len() - axis.partition_point(|i| i < x)) as u64 };
        let indices_lt = |x: &Rat| -> u64 { axis.partition_point(|i| i < x) as u64 };
        let has_index_in = |lo: &Rat, hi: &Rat| -> bool {
            // any checked index in [lo, hi)
            let k = axis.partition_point(|i| i < lo);
            k < axis.len() && axis[k] < *hi
        };

        for (a, u) in verts.iter().enumerate() {
            // self-edges would break the strict order
            order_obligations += 1;
            if RationalPlaneGraph::edge_rule(u, u) {
                order_verdict = Verdict::Refuted(format!("W_{m}: self-edge at {u}"));
            }
            for v in &verts[a + 1..] {
                let uv = RationalPlaneGraph::edge_rule(u, v);
                let vu = RationalPlaneGraph::edge_rule(v, u);
                // strict total order: exactly one direction per pair,
                // hence no cycles in any window
                order_obligations += 1;
                if uv == vu {
                    order_verdict = Verdict::Refuted(format!(
                        "W_{m}: edge rule not a strict order at ({u},{v})"
                    ));
                }
                // hereditary: an edge u → v violates H_i iff u ∈ H_i and
                // v ∉ H_i, i.e. some checked index lies in [u.x, v.x)
                if uv {
                    hereditary_obligations += indices_geq(&u.0);
                    if has_index_in(&u.0, &v.0) {
                        hereditary_verdict =
                            Verdict::Refuted(format!("W_{m}: edge {u} → {v} leaves some H_i"));
                    }
                }
                if vu {
                    hereditary_obligations += indices_geq(&v.0);
                    if has_index_in(&v.0, &u.0) {
                        hereditary_verdict =
                            Verdict::Refuted(format!("W_{m}: edge {v} → {u} leaves some H_i"));
                    }
                }
                // downward directedness of E⁰∖H_i: the witness
                // w = (min(x), min(y) − 1) serves every i < min(x) at once
                let min_x = u.0.min(v.0);
                let applicable = indices_lt(&min_x);
                if applicable > 0 {
                    downward_obligations += applicable;
                    let w = PlaneVertex(min_x, u.1.min(v.1) - Ratio::from_integer(1));
                    // w lies outside every applicable H_i iff w.x exceeds
                    // the largest checked index below min_x
                    let ok = RationalPlaneGraph::edge_rule(u, &w)
                        && RationalPlaneGraph::edge_rule(v, &w)
                        && w.0 > axis[applicable as usize - 1];
                    if !ok {
                        downward_verdict =
                            Verdict::Refuted(format!("W_{m}: witness {w} fails for ({u},{v})"));
                    }
                }
            }
        }
    }

    checks.push(CheckLine {
        claim: "every vertex is an infinite emitter (saturation holds vacuously)".into(),
        verdict: kind_verdict,
        obligations: kind_obligations,
    });
    checks.push(CheckLine {
        claim: "each H_i = {(x,y) : x ≤ i} is hereditary inside the window".into(),
        verdict: hereditary_verdict,
        obligations: hereditary_obligations,
    });
    checks.push(CheckLine {
        claim: "the edge rule is a strict order (windows are acyclic)".into(),
        verdict: order_verdict,
        obligations: order_obligations,
    });
    checks.push(CheckLine {
        claim: "each E⁰ ∖ H_i is downward directed (witness (min(a,c), min(b,d)−1))".into(),
        verdict: downward_verdict,
        obligations: downward_obligations,
    });

    let chain = verify_certificate(&gg, &plane_chain_certificate(), windows)?;
    checks.push(CheckLine {
        claim: "chain pattern P_i = ⋂_{j>i} P_j (witness j = (i+x)/2)".into(),
        verdict: chain.verdict.clone(),
        obligations: chain.obligations,
    });

    let prime_inputs_ok = checks[..5].iter().all(|c| c.verdict.is_verified());
    let mut conclusions = vec![
        Conclusion {
            statement: "each H_i is hereditary and vacuously saturated".into(),
            status: if prime_inputs_ok {
                ConclusionStatus::Certified
            } else {
                ConclusionStatus::Inconclusive
            },
            basis: "window obligations for heredity; every vertex is an infinite emitter".into(),
        },
        Conclusion {
            statement: "each P_i = I(H_i, B_{H_i}) is a graded prime".into(),
            status: if prime_inputs_ok {
                ConclusionStatus::Certified
            } else {
                ConclusionStatus::Inconclusive
            },
            basis: "hereditary saturated H_i with downward directed complement".into(),
        },
        Conclusion {
            statement: "each P_i is locally closed".into(),
            status: if chain.verdict.is_verified() {
                ConclusionStatus::Refuted
            } else {
                ConclusionStatus::Inconclusive
            },
            basis: "P_i is the intersection of the P_j, j > i, by the chain certificate".into(),
        },
    ];

    let rationality = match field.cardinality {
        Cardinality::Uncountable => Conclusion {
            statement: "each P_i is rational".into(),
            status: if prime_inputs_ok {
                ConclusionStatus::Certified
            } else {
                ConclusionStatus::Inconclusive
            },
            basis: "acyclic graph with countably many vertices over an uncountable field \
                    (von Neumann regular prime algebra of dimension < |K|)"
                .into(),
        },
        _ => Conclusion {
            statement: "each P_i is rational".into(),
            status: ConclusionStatus::Inconclusive,
            basis: "the dimension bound needs |K| uncountable; nothing applies over this field"
                .into(),
        },
    };
    conclusions.push(rationality);

    Ok(ExampleReport {
        example: "rational-plane".into(),
        windows: windows.to_vec(),
        field: Some(field.clone()),
        checks,
        conclusions,
        caveat: CAVEAT.into(),
    })
}
