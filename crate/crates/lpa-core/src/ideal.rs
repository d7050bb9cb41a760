//! Hereditary saturated vertex sets, breaking vertices, admissible pairs,
//! and quotient graphs.
//!
//! An admissible pair `(H, S)` — a hereditary saturated `H` together with a
//! subset `S` of its breaking vertices — is the coordinate system for the
//! graded ideals `I(H,S)`. Containment and meets of graded ideals are
//! computed on pairs; the glb formula for meets is pinned by an exhaustive
//! property test rather than assumed.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{EdgeId, EdgeSpec, Graph, GraphError, VertexId, VertexKind, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("admissible data requires hereditary saturated H")]
    NotHereditarySaturated,
    #[error("S must be a subset of the breaking vertices of H")]
    NotBreakingSubset,
    #[error("quotient of improper pair is the empty graph")]
    ImproperQuotient,
    #[error("meet of an empty list of pairs")]
    EmptyMeet,
}

/// Is `H` closed under edge targets (equivalently, under reachability)?
pub fn is_hereditary(g: &Graph, h: &VertexSet) -> Result<bool, IdealError> {
    g.check_subset(h)?;
    for v in h {
        for e in g.out_edges(v)? {
            if !h.contains(&e.target) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Does `H` contain every regular vertex all of whose edge targets lie in
/// `H`? Sinks and infinite emitters impose no constraint.
pub fn is_saturated(g: &Graph, h: &VertexSet) -> Result<bool, IdealError> {
    g.check_subset(h)?;
    for v in g.vertices() {
        if h.contains(v) || g.vertex_kind(v)? != VertexKind::Regular {
            continue;
        }
        if g.out_edges(v)?.iter().all(|e| h.contains(&e.target)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least hereditary saturated superset of `X`, by fixpoint iteration:
/// alternately add all targets of members and all regular vertices whose
/// targets already lie inside.
pub fn hs_closure(g: &Graph, x: &VertexSet) -> Result<VertexSet, IdealError> {
    g.check_subset(x)?;
    let mut y = x.clone();
    loop {
        let mut grew = false;
        let members: Vec<VertexId> = y.iter().cloned().collect();
        for v in &members {
            for e in g.out_edges(v)? {
                if y.insert(e.target.clone()) {
                    grew = true;
                }
            }
        }
        for v in g.vertices() {
            if y.contains(v) || g.vertex_kind(v)? != VertexKind::Regular {
                continue;
            }
            if g.out_edges(v)?.iter().all(|e| y.contains(&e.target)) {
                y.insert(v.clone());
                grew = true;
            }
        }
        if !grew {
            return Ok(y);
        }
    }
}

/// The complete family of hereditary saturated subsets of `E⁰`, including
/// `∅` and `E⁰`.
///
/// Generated as the join-closure (join = closure of union) of the singleton
/// closures: every hereditary saturated set is the join of the closures of
/// its singletons. The 2ⁿ brute-force filter is kept as an oracle in
/// [`crate::oracle::hs_sets_bruteforce`].
pub fn enumerate_hs_sets(g: &Graph) -> Result<Vec<VertexSet>, IdealError> {
    let mut family: std::collections::BTreeSet<VertexSet> = [VertexSet::new()].into();
    for v in g.vertices() {
        family.insert(hs_closure(g, &[v.clone()].into())?);
    }
    loop {
        let mut fresh = Vec::new();
        let members: Vec<&VertexSet> = family.iter().collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let join = hs_closure(g, &a.union(b).cloned().collect())?;
                if !family.contains(&join) {
                    fresh.push(join);
                }
            }
        }
        if fresh.is_empty() {
            return Ok(family.into_iter().collect());
        }
        family.extend(fresh);
    }
}

/// Breaking vertices of `H`: infinite emitters outside `H` whose total
/// multiplicity into `E⁰ \ H` is finite and non-zero. An ω-edge landing
/// outside `H` disqualifies; so does emitting nothing outside `H`.
pub fn breaking_vertices(g: &Graph, h: &VertexSet) -> Result<VertexSet, IdealError> {
    if !(is_hereditary(g, h)? && is_saturated(g, h)?) {
        return Err(IdealError::NotHereditarySaturated);
    }
    let mut b = VertexSet::new();
    for w in g.vertices() {
        if h.contains(w) || g.vertex_kind(w)? != VertexKind::InfiniteEmitter {
            continue;
        }
        let outside: Vec<&EdgeSpec> = g
            .out_edges(w)?
            .into_iter()
            .filter(|e| !h.contains(&e.target))
            .collect();
        if !outside.is_empty() && outside.iter().all(|e| !e.mult.is_omega()) {
            b.insert(w.clone());
        }
    }
    Ok(b)
}

/// Intersection of all non-empty hereditary saturated subsets, computed as
/// `⋂_v hs_closure({v})`. May be empty.
pub fn minimal_core(g: &Graph) -> Result<VertexSet, IdealError> {
    let mut core: Option<VertexSet> = None;
    for v in g.vertices() {
        let cl = hs_closure(g, &[v.clone()].into())?;
        core = Some(match core {
            None => cl,
            Some(acc) => acc.intersection(&cl).cloned().collect(),
        });
    }
    Ok(core.unwrap_or_default())
}

/// Admissible pair `(H, S)`: hereditary saturated `H` with `S ⊆ B_H`.
/// Coordinates of the graded ideal `I(H,S)`; the generator `v^H` is
/// represented implicitly by membership `v ∈ S`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdmissiblePair {
    h: VertexSet,
    s: VertexSet,
}

impl AdmissiblePair {
    pub fn new(g: &Graph, h: VertexSet, s: VertexSet) -> Result<Self, IdealError> {
        let b = breaking_vertices(g, &h)?;
        if !s.is_subset(&b) {
            return Err(IdealError::NotBreakingSubset);
        }
        Ok(AdmissiblePair { h, s })
    }

    /// The pair `(H, B_H)`.
    pub fn full(g: &Graph, h: VertexSet) -> Result<Self, IdealError> {
        let b = breaking_vertices(g, &h)?;
        Ok(AdmissiblePair { h, s: b })
    }

    pub fn h(&self) -> &VertexSet {
        &self.h
    }

    pub fn s(&self) -> &VertexSet {
        &self.s
    }
}

impl std::fmt::Display for AdmissiblePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let list = |s: &VertexSet| {
            s.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({{{}}},{{{}}})", list(&self.h), list(&self.s))
    }
}

/// Containment of graded ideals on coordinates:
/// `I(H₁,S₁) ⊆ I(H₂,S₂)` iff `H₁ ⊆ H₂` and `S₁ ⊆ H₂ ∪ S₂`.
pub fn pair_leq(p1: &AdmissiblePair, p2: &AdmissiblePair) -> bool {
    p1.h.is_subset(&p2.h) && p1.s.iter().all(|v| p2.h.contains(v) || p2.s.contains(v))
}

/// Greatest lower bound of a non-empty list of pairs:
/// `H = ⋂ Hᵢ` and `S = B_H ∩ ⋂ (Hᵢ ∪ Sᵢ)`.
pub fn pair_meet(g: &Graph, pairs: &[AdmissiblePair]) -> Result<AdmissiblePair, IdealError> {
    let first = pairs.first().ok_or(IdealError::EmptyMeet)?;
    let mut h = first.h.clone();
    for p in &pairs[1..] {
        h = h.intersection(&p.h).cloned().collect();
    }
    let b = breaking_vertices(g, &h)?;
    let s = b
        .into_iter()
        .filter(|v| pairs.iter().all(|p| p.h.contains(v) || p.s.contains(v)))
        .collect();
    Ok(AdmissiblePair { h, s })
}

/// Where a quotient-graph vertex came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Original(VertexId),
    /// Primed sink copy `v′` of a breaking vertex `v ∈ B_H \ S`.
    PrimedCopyOf(VertexId),
}

#[derive(Debug, Clone)]
pub struct QuotientGraph {
    pub graph: Graph,
    pub provenance: BTreeMap<VertexId, Provenance>,
}

impl QuotientGraph {
    /// The quotient vertex that is the primed copy of `v`, if present.
    pub fn primed_copy(&self, v: &VertexId) -> Option<&VertexId> {
        self.provenance.iter().find_map(|(q, p)| match p {
            Provenance::PrimedCopyOf(orig) if orig == v => Some(q),
            _ => None,
        })
    }
}

/// Quotient graph `E \ (H,S)`: vertices `(E⁰ \ H) ∪ {v′ : v ∈ B_H \ S}`,
/// edges with target outside `H` (multiplicity preserved) plus a primed
/// duplicate `e′ : s(e) → v′` for every edge `e` with target `v ∈ B_H \ S`.
/// Primed vertices are sinks; a breaking vertex keeps only its finitely
/// many edges into `E⁰ \ H` and so becomes regular (or a sink).
pub fn quotient_graph(g: &Graph, pair: &AdmissiblePair) -> Result<QuotientGraph, IdealError> {
    let b = breaking_vertices(g, &pair.h)?;
    if !pair.s.is_subset(&b) {
        return Err(IdealError::NotBreakingSubset);
    }
    let kept: Vec<VertexId> = g
        .vertices()
        .iter()
        .filter(|v| !pair.h.contains(*v))
        .cloned()
        .collect();
    if kept.is_empty() {
        return Err(IdealError::ImproperQuotient);
    }
    let unprimed: VertexSet = b.difference(&pair.s).cloned().collect();

    let mut vertices = kept.clone();
    let mut provenance: BTreeMap<VertexId, Provenance> = kept
        .iter()
        .map(|v| (v.clone(), Provenance::Original(v.clone())))
        .collect();
    let mut primed_name: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for v in &unprimed {
        let mut name = format!("{v}'");
        while provenance.contains_key(&VertexId::new(name.clone())) {
            name.push('\'');
        }
        let fresh = VertexId::new(name);
        vertices.push(fresh.clone());
        provenance.insert(fresh.clone(), Provenance::PrimedCopyOf(v.clone()));
        primed_name.insert(v.clone(), fresh);
    }

    let mut edges = Vec::new();
    let mut edge_ids: std::collections::BTreeSet<EdgeId> = std::collections::BTreeSet::new();
    for e in g.edges() {
        if !pair.h.contains(&e.target) {
            edges.push(e.clone());
            edge_ids.insert(e.id.clone());
        }
    }
    for e in g.edges() {
        if let Some(target) = primed_name.get(&e.target) {
            let mut name = format!("{}'", e.id);
            while edge_ids.contains(&EdgeId::new(name.clone())) {
                name.push('\'');
            }
            let id = EdgeId::new(name);
            edge_ids.insert(id.clone());
            edges.push(EdgeSpec {
                id,
                source: e.source.clone(),
                target: target.clone(),
                mult: e.mult,
            });
        }
    }

    let graph = Graph::new(vertices, edges)?;
    Ok(QuotientGraph { graph, provenance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Multiplicity;

    fn vs(names: &[&str]) -> VertexSet {
        names.iter().map(|n| VertexId::new(*n)).collect()
    }

    #[test]
    fn hereditary_examples() {
        let a = fixtures::arrow();
        assert!(is_hereditary(&a, &vs(&["v"])).unwrap());
        assert!(!is_hereditary(&a, &vs(&["u"])).unwrap());
    }

    #[test]
    fn saturated_examples() {
        let a = fixtures::arrow();
        // u is regular with its only target v ∈ H, but u ∉ H
        assert!(!is_saturated(&a, &vs(&["v"])).unwrap());
        assert!(is_saturated(&a, &VertexSet::new()).unwrap());

        let c = fixtures::emitter_cycle();
        // v is regular with target w ∉ H; w is an infinite emitter, exempt
        assert!(is_saturated(&c, &vs(&["h"])).unwrap());
    }

    #[test]
    fn closure_examples() {
        let a = fixtures::arrow();
        assert_eq!(hs_closure(&a, &vs(&["v"])).unwrap(), vs(&["u", "v"]));
        assert_eq!(hs_closure(&a, &VertexSet::new()).unwrap(), VertexSet::new());

        let c = fixtures::emitter_cycle();
        assert_eq!(hs_closure(&c, &vs(&["h"])).unwrap(), vs(&["h"]));
        assert_eq!(hs_closure(&c, &vs(&["w"])).unwrap(), vs(&["w", "h", "v"]));
    }

    #[test]
    fn enumerate_examples() {
        let a = fixtures::arrow();
        assert_eq!(
            enumerate_hs_sets(&a).unwrap(),
            vec![VertexSet::new(), vs(&["u", "v"])]
        );

        let b = fixtures::single_loop();
        assert_eq!(
            enumerate_hs_sets(&b).unwrap(),
            vec![VertexSet::new(), vs(&["v"])]
        );

        let c = fixtures::emitter_cycle();
        assert_eq!(
            enumerate_hs_sets(&c).unwrap(),
            vec![VertexSet::new(), vs(&["h"]), vs(&["h", "v", "w"])]
        );
    }

    #[test]
    fn breaking_vertex_examples() {
        let c = fixtures::emitter_cycle();
        assert_eq!(breaking_vertices(&c, &vs(&["h"])).unwrap(), vs(&["w"]));
        assert_eq!(
            breaking_vertices(&c, &VertexSet::new()).unwrap(),
            VertexSet::new()
        );

        let a = fixtures::arrow();
        assert_eq!(
            breaking_vertices(&a, &VertexSet::new()).unwrap(),
            VertexSet::new()
        );
        assert!(matches!(
            breaking_vertices(&a, &vs(&["u"])),
            Err(IdealError::NotHereditarySaturated)
        ));
    }

    #[test]
    fn minimal_core_examples() {
        assert_eq!(minimal_core(&fixtures::arrow()).unwrap(), vs(&["u", "v"]));
        assert_eq!(
            minimal_core(&fixtures::emitter_cycle()).unwrap(),
            vs(&["h"])
        );
        assert_eq!(
            minimal_core(&fixtures::two_sinks()).unwrap(),
            VertexSet::new()
        );
    }

    #[test]
    fn pair_order_examples() {
        let c = fixtures::emitter_cycle();
        let p0 = AdmissiblePair::new(&c, VertexSet::new(), VertexSet::new()).unwrap();
        let ph = AdmissiblePair::new(&c, vs(&["h"]), VertexSet::new()).unwrap();
        let phw = AdmissiblePair::new(&c, vs(&["h"]), vs(&["w"])).unwrap();

        assert!(pair_leq(&ph, &phw));
        assert!(pair_leq(&p0, &ph));
        assert!(!pair_leq(&phw, &ph)); // w ∉ {h} ∪ ∅

        // S must be made of breaking vertices
        assert!(matches!(
            AdmissiblePair::new(&c, vs(&["h"]), vs(&["v"])),
            Err(IdealError::NotBreakingSubset)
        ));
    }

    #[test]
    fn pair_meet_examples() {
        let c = fixtures::emitter_cycle();
        let p0 = AdmissiblePair::new(&c, VertexSet::new(), VertexSet::new()).unwrap();
        let ph = AdmissiblePair::new(&c, vs(&["h"]), VertexSet::new()).unwrap();
        let phw = AdmissiblePair::new(&c, vs(&["h"]), vs(&["w"])).unwrap();

        assert_eq!(pair_meet(&c, std::slice::from_ref(&phw)).unwrap(), phw);
        assert_eq!(pair_meet(&c, &[phw.clone(), ph.clone()]).unwrap(), ph);
        assert_eq!(pair_meet(&c, &[phw, p0.clone()]).unwrap(), p0);
        assert!(matches!(pair_meet(&c, &[]), Err(IdealError::EmptyMeet)));
    }

    #[test]
    fn quotient_examples() {
        let c = fixtures::emitter_cycle();
        let phw = AdmissiblePair::new(&c, vs(&["h"]), vs(&["w"])).unwrap();
        let q = quotient_graph(&c, &phw).unwrap();
        assert_eq!(q.graph.vertex_set(), vs(&["w", "v"]));
        assert_eq!(q.graph.edges().len(), 2); // w→v, v→w: a 2-cycle, no exits

        let ph = AdmissiblePair::new(&c, vs(&["h"]), VertexSet::new()).unwrap();
        let q = quotient_graph(&c, &ph).unwrap();
        assert_eq!(q.graph.vertex_set(), vs(&["w", "v", "w'"]));
        assert_eq!(q.graph.edges().len(), 3); // w→v, v→w, v→w′
        let primed = q.primed_copy(&"w".into()).unwrap().clone();
        assert_eq!(
            q.graph.vertex_kind(&primed).unwrap(),
            crate::graph::VertexKind::Sink
        );
        // w keeps only its finite edge into E⁰\H, so it is regular here
        assert_eq!(
            q.graph.vertex_kind(&"w".into()).unwrap(),
            crate::graph::VertexKind::Regular
        );

        // identity quotient
        let p0 = AdmissiblePair::new(&c, VertexSet::new(), VertexSet::new()).unwrap();
        let q = quotient_graph(&c, &p0).unwrap();
        assert_eq!(q.graph, c);

        // improper pair
        let all = AdmissiblePair::new(&c, vs(&["w", "h", "v"]), VertexSet::new()).unwrap();
        assert!(matches!(
            quotient_graph(&c, &all),
            Err(IdealError::ImproperQuotient)
        ));
    }

    #[test]
    fn primed_names_avoid_collisions() {
        // a graph that already contains a vertex named w'
        let g = Graph::build(
            &["w", "w'", "h"],
            &[
                ("e1", "w", "h", Multiplicity::Omega),
                ("e2", "w", "w'", Multiplicity::ONE),
                ("e3", "w'", "w", Multiplicity::ONE),
            ],
        )
        .unwrap();
        let h = vs(&["h"]);
        assert_eq!(breaking_vertices(&g, &h).unwrap(), vs(&["w"]));
        let pair = AdmissiblePair::new(&g, h, VertexSet::new()).unwrap();
        let q = quotient_graph(&g, &pair).unwrap();
        let primed = q.primed_copy(&"w".into()).unwrap();
        assert_eq!(primed.as_str(), "w''");
        assert_eq!(q.graph.vertices().len(), 3);
    }

    #[test]
    fn closure_laws_on_fuzzed_graphs() {
        for seed in 100..140u64 {
            let g = crate::oracle::random_graph(&crate::oracle::FuzzParams {
                max_vertices: 6,
                max_edge_specs: 10,
                omega_edge_probability: 0.25,
                count: 1,
                seed,
            })
            .unwrap();
            let family = enumerate_hs_sets(&g).unwrap();
            // closed under intersection and closure-of-union
            for a in &family {
                for b in &family {
                    let inter: VertexSet = a.intersection(b).cloned().collect();
                    assert!(family.contains(&inter));
                    let join = hs_closure(&g, &a.union(b).cloned().collect()).unwrap();
                    assert!(family.contains(&join));
                }
            }
            // breaking vertices never meet H
            for h in &family {
                let b = breaking_vertices(&g, h).unwrap();
                assert!(b.intersection(h).next().is_none());
            }
            // minimal core is itself hereditary and saturated
            let m = minimal_core(&g).unwrap();
            assert!(is_hereditary(&g, &m).unwrap());
            assert!(is_saturated(&g, &m).unwrap());
        }
    }
}
