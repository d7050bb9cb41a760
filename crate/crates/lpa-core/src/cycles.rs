//! Cycle enumeration and cycle-based graph conditions: exits, Conditions
//! (L) and (K), no-exit cycles, extreme cycles, and the finite-graph
//! trichotomy (every vertex connects to a sink, a no-exit cycle, or an
//! extreme cycle).

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, Multiplicity, VertexId, VertexKind, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("not a cycle of this graph: {0}")]
    NotACycle(String),
}

/// A cycle: a closed path that does not pass through any vertex twice,
/// stored as its edge-id sequence in the canonical rotation
/// (lexicographically least edge-id sequence).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cycle {
    edge_ids: Vec<EdgeId>,
    base: VertexId,
}

impl Cycle {
    /// Builds a cycle from an edge-id sequence, validating closure and
    /// vertex-simplicity and canonicalizing the rotation.
    pub fn from_edges(g: &Graph, edge_ids: Vec<EdgeId>) -> Result<Self, CycleError> {
        if edge_ids.is_empty() {
            return Err(CycleError::NotACycle("empty edge sequence".into()));
        }
        let specs: Vec<_> = edge_ids
            .iter()
            .map(|id| {
                g.edge(id)
                    .ok_or_else(|| CycleError::NotACycle(format!("unknown edge {id}")))
            })
            .collect::<Result<_, _>>()?;
        let mut seen = VertexSet::new();
        for (i, e) in specs.iter().enumerate() {
            let next = &specs[(i + 1) % specs.len()];
            if e.target != next.source {
                return Err(CycleError::NotACycle(format!(
                    "edge {} does not continue into {}",
                    e.id, next.id
                )));
            }
            if !seen.insert(e.source.clone()) {
                return Err(CycleError::NotACycle(format!(
                    "vertex {} repeats",
                    e.source
                )));
            }
        }
        Ok(Cycle::canonical(g, edge_ids))
    }

    fn canonical(g: &Graph, edge_ids: Vec<EdgeId>) -> Self {
        let n = edge_ids.len();
        let best = (0..n)
            .map(|r| {
                let mut rot = edge_ids[r..].to_vec();
                rot.extend_from_slice(&edge_ids[..r]);
                rot
            })
            .min()
            .expect("non-empty rotation set");
        let base = g.edge(&best[0]).expect("validated edge").source.clone();
        Cycle {
            edge_ids: best,
            base,
        }
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn base(&self) -> &VertexId {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a cycle has at least one edge
    }

    /// The vertex set `c⁰` of the cycle.
    pub fn vertices_on(&self, g: &Graph) -> Result<VertexSet, CycleError> {
        self.edge_ids
            .iter()
            .map(|id| {
                g.edge(id)
                    .map(|e| e.source.clone())
                    .ok_or_else(|| CycleError::NotACycle(format!("unknown edge {id}")))
            })
            .collect()
    }
}

impl std::fmt::Display for Cycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ids: Vec<String> = self.edge_ids.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", ids.join(" "))
    }
}

/// All cycles of `g`, one per rotation class, in deterministic order.
/// Parallel edge specs yield distinct cycles; extra multiplicity on a spec
/// does not (a cycle traverses edge classes).
pub fn simple_cycles(g: &Graph) -> Vec<Cycle> {
    let verts = g.vertices();
    let pos: BTreeMap<&VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    // cycles live inside strongly connected components
    let mut comp_of: BTreeMap<&VertexId, usize> = BTreeMap::new();
    for (ci, comp) in g.sccs().iter().enumerate() {
        for v in comp {
            comp_of.insert(verts.iter().find(|x| *x == v).expect("scc vertex"), ci);
        }
    }

    let mut found: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
    for (start, s) in verts.iter().enumerate() {
        // vertex-simple paths through positions > start, inside s's SCC
        let mut path: Vec<EdgeId> = Vec::new();
        let mut on_path: BTreeSet<usize> = [start].into();
        dfs_cycles(
            g,
            &pos,
            &comp_of,
            start,
            s,
            &mut path,
            &mut on_path,
            &mut found,
        );
    }
    found
        .into_iter()
        .map(|ids| Cycle::canonical(g, ids))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles(
    g: &Graph,
    pos: &BTreeMap<&VertexId, usize>,
    comp_of: &BTreeMap<&VertexId, usize>,
    start: usize,
    current: &VertexId,
    path: &mut Vec<EdgeId>,
    on_path: &mut BTreeSet<usize>,
    found: &mut BTreeSet<Vec<EdgeId>>,
) {
    let start_comp = comp_of[&g.vertices()[start]];
    for e in g.out_edges(current).expect("vertex on path") {
        let tp = pos[&e.target];
        if tp == start {
            path.push(e.id.clone());
            let canon = Cycle::canonical(g, path.clone());
            found.insert(canon.edge_ids);
            path.pop();
            continue;
        }
        if tp < start || on_path.contains(&tp) || comp_of[&e.target] != start_comp {
            continue;
        }
        path.push(e.id.clone());
        on_path.insert(tp);
        dfs_cycles(g, pos, comp_of, start, &e.target, path, on_path, found);
        on_path.remove(&tp);
        path.pop();
    }
}

/// Does some vertex on `c` emit an edge other than the unique cycle edge
/// leaving it? Extra multiplicity (k ≥ 2 or ω) on a cycle edge counts: the
/// parallel copies are exits.
pub fn has_exit(g: &Graph, c: &Cycle) -> Result<bool, CycleError> {
    for id in c.edge_ids() {
        let e = g
            .edge(id)
            .ok_or_else(|| CycleError::NotACycle(format!("unknown edge {id}")))?;
        if !matches!(e.mult, Multiplicity::Finite(1)) {
            return Ok(true);
        }
        for f in g.out_edges(&e.source)? {
            if f.id != e.id {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Condition (L): every cycle has an exit. Vacuously true for acyclic graphs.
pub fn condition_l(g: &Graph) -> Result<bool, CycleError> {
    for c in simple_cycles(g) {
        if !has_exit(g, &c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The cycles of `g` without exits.
pub fn no_exit_cycles(g: &Graph) -> Result<Vec<Cycle>, CycleError> {
    let mut out = Vec::new();
    for c in simple_cycles(g) {
        if !has_exit(g, &c)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Condition (K): every vertex lying on some closed path is the base of at
/// least two distinct closed simple paths (paths through their base exactly
/// once, other vertices may repeat).
pub fn condition_k(g: &Graph) -> Result<bool, CycleError> {
    let cycles = simple_cycles(g);
    let mut on_cycle = VertexSet::new();
    for c in &cycles {
        on_cycle.extend(c.vertices_on(g)?);
    }
    for v in &on_cycle {
        if !two_returns(g, &cycles, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Counts closed simple paths based at `v`, saturating at two.
///
/// Each cycle through `v` contributes one path per choice of parallel edge
/// copies (the product of its multiplicities). If exactly one remains, a
/// second path exists iff some first-return walk can detour through a cycle
/// avoiding `v`: a vertex that is forward- and backward-reachable from `v`
/// without passing through `v`, and lies on a cycle of `g − v`.
fn two_returns(g: &Graph, cycles: &[Cycle], v: &VertexId) -> Result<bool, CycleError> {
    let mut count: u64 = 0;
    for c in cycles {
        if !c.vertices_on(g)?.contains(v) {
            continue;
        }
        let mut copies: u64 = 1;
        for id in c.edge_ids() {
            match g.edge(id).expect("cycle edge").mult {
                Multiplicity::Finite(k) => copies = copies.saturating_mul(k),
                Multiplicity::Omega => copies = 2,
            }
            if copies >= 2 {
                break;
            }
        }
        count = count.saturating_add(copies);
        if count >= 2 {
            return Ok(true);
        }
    }
    if count == 0 {
        return Ok(false);
    }

    // exactly one cycle through v, multiplicity-free: look for a pumpable detour
    let forward = avoid_reachable(g, v, false)?;
    let backward = avoid_reachable(g, v, true)?;
    let minus_v = induced_without(g, v)?;
    let mut loopable = VertexSet::new();
    if let Some(sub) = &minus_v {
        for comp in sub.sccs() {
            if comp.len() >= 2 {
                loopable.extend(comp);
            }
        }
        for e in sub.edges() {
            if e.source == e.target {
                loopable.insert(e.source.clone());
            }
        }
    }
    Ok(forward
        .intersection(&backward)
        .any(|u| loopable.contains(u)))
}

/// Vertices `u ≠ v` reachable from `v` (or reaching `v`, when `reverse`)
/// by a path that does not pass through `v` internally.
fn avoid_reachable(g: &Graph, v: &VertexId, reverse: bool) -> Result<VertexSet, CycleError> {
    let mut seen = VertexSet::new();
    let mut queue: Vec<VertexId> = Vec::new();
    for e in g.edges() {
        let (from, to) = if reverse {
            (&e.target, &e.source)
        } else {
            (&e.source, &e.target)
        };
        if from == v && to != v && seen.insert(to.clone()) {
            queue.push(to.clone());
        }
    }
    while let Some(u) = queue.pop() {
        for e in g.edges() {
            let (from, to) = if reverse {
                (&e.target, &e.source)
            } else {
                (&e.source, &e.target)
            };
            if *from == u && to != v && seen.insert(to.clone()) {
                queue.push(to.clone());
            }
        }
    }
    Ok(seen)
}

fn induced_without(g: &Graph, v: &VertexId) -> Result<Option<Graph>, CycleError> {
    let vertices: Vec<VertexId> = g.vertices().iter().filter(|u| *u != v).cloned().collect();
    if vertices.is_empty() {
        return Ok(None);
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| e.source != *v && e.target != *v)
        .cloned()
        .collect();
    Ok(Some(
        Graph::new(vertices, edges).map_err(CycleError::Graph)?,
    ))
}

/// Is `c` an extreme cycle: it has exits, and every vertex reachable from
/// `c⁰` reaches back to `c⁰`?
pub fn is_extreme_cycle(g: &Graph, c: &Cycle) -> Result<bool, CycleError> {
    if !has_exit(g, c)? {
        return Ok(false);
    }
    let on = c.vertices_on(g)?;
    for v in &on {
        for u in g.reachable_from(v)? {
            let returns = on.iter().any(|w| g.reaches(&u, w).unwrap_or(false));
            if !returns {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How a vertex connects to a terminal structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectionWitness {
    ToSink { sink: VertexId, path: Vec<EdgeId> },
    ToNoExitCycle { cycle: Cycle, path: Vec<EdgeId> },
    ToExtremeCycle { cycle: Cycle, path: Vec<EdgeId> },
}

impl ConnectionWitness {
    pub fn class_name(&self) -> &'static str {
        match self {
            ConnectionWitness::ToSink { .. } => "sink",
            ConnectionWitness::ToNoExitCycle { .. } => "no-exit cycle",
            ConnectionWitness::ToExtremeCycle { .. } => "extreme cycle",
        }
    }
}

/// Witnesses that every vertex connects to a sink, a no-exit cycle, or an
/// extreme cycle. A vertex with no witness is reported, not an error: on
/// finite graphs that would indicate a bug, and the suites assert it never
/// happens.
#[derive(Debug, Clone)]
pub struct TrichotomyReport {
    pub witnesses: BTreeMap<VertexId, ConnectionWitness>,
    pub unclassified: Vec<VertexId>,
}

impl TrichotomyReport {
    pub fn is_total(&self) -> bool {
        self.unclassified.is_empty()
    }
}

pub fn trichotomy_report(g: &Graph) -> Result<TrichotomyReport, CycleError> {
    let sinks: Vec<VertexId> = g
        .vertices()
        .iter()
        .filter(|v| g.vertex_kind(v).ok() == Some(VertexKind::Sink))
        .cloned()
        .collect();
    let cycles = simple_cycles(g);
    let mut no_exit = Vec::new();
    let mut extreme = Vec::new();
    for c in &cycles {
        if !has_exit(g, c)? {
            no_exit.push(c.clone());
        } else if is_extreme_cycle(g, c)? {
            extreme.push(c.clone());
        }
    }

    let mut witnesses = BTreeMap::new();
    let mut unclassified = Vec::new();
    'vertex: for v in g.vertices() {
        for s in &sinks {
            if let Some(path) = g.path(v, s)? {
                witnesses.insert(
                    v.clone(),
                    ConnectionWitness::ToSink {
                        sink: s.clone(),
                        path,
                    },
                );
                continue 'vertex;
            }
        }
        for c in &no_exit {
            for w in c.vertices_on(g)? {
                if let Some(path) = g.path(v, &w)? {
                    witnesses.insert(
                        v.clone(),
                        ConnectionWitness::ToNoExitCycle {
                            cycle: c.clone(),
                            path,
                        },
                    );
                    continue 'vertex;
                }
            }
        }
        for c in &extreme {
            for w in c.vertices_on(g)? {
                if let Some(path) = g.path(v, &w)? {
                    witnesses.insert(
                        v.clone(),
                        ConnectionWitness::ToExtremeCycle {
                            cycle: c.clone(),
                            path,
                        },
                    );
                    continue 'vertex;
                }
            }
        }
        unclassified.push(v.clone());
    }
    Ok(TrichotomyReport {
        witnesses,
        unclassified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::Multiplicity;
    use crate::ideal::{quotient_graph, AdmissiblePair};

    fn vs(names: &[&str]) -> VertexSet {
        names.iter().map(|n| VertexId::new(*n)).collect()
    }

    #[test]
    fn simple_cycles_examples() {
        assert!(simple_cycles(&fixtures::arrow()).is_empty());

        let b = fixtures::single_loop();
        let cs = simple_cycles(&b);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].len(), 1);

        let c = fixtures::emitter_cycle();
        let cs = simple_cycles(&c);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].vertices_on(&c).unwrap(), vs(&["w", "v"]));
    }

    #[test]
    fn rose_has_two_cycles() {
        let r = fixtures::rose_two_loops();
        assert_eq!(simple_cycles(&r).len(), 2);
    }

    #[test]
    fn exit_examples() {
        let b = fixtures::single_loop();
        let loop_cycle = &simple_cycles(&b)[0];
        assert!(!has_exit(&b, loop_cycle).unwrap());

        let c = fixtures::emitter_cycle();
        let two_cycle = &simple_cycles(&c)[0];
        assert!(has_exit(&c, two_cycle).unwrap()); // exit w →ω h

        // a loop of multiplicity 2: the parallel copy is an exit
        let b2 = Graph::build(&["v"], &[("e", "v", "v", Multiplicity::Finite(2))]).unwrap();
        let loop2 = &simple_cycles(&b2)[0];
        assert!(has_exit(&b2, loop2).unwrap());
    }

    #[test]
    fn condition_l_examples() {
        assert!(condition_l(&fixtures::arrow()).unwrap());
        assert!(!condition_l(&fixtures::single_loop()).unwrap());

        // quotient of emitter_cycle by ({h}, ∅): cycle with exit v → w′
        let c = fixtures::emitter_cycle();
        let pair = AdmissiblePair::new(&c, vs(&["h"]), VertexSet::new()).unwrap();
        let q = quotient_graph(&c, &pair).unwrap();
        assert!(condition_l(&q.graph).unwrap());

        // quotient by ({h}, {w}): exitless 2-cycle
        let pair = AdmissiblePair::new(&c, vs(&["h"]), vs(&["w"])).unwrap();
        let q = quotient_graph(&c, &pair).unwrap();
        assert!(!condition_l(&q.graph).unwrap());
        assert_eq!(no_exit_cycles(&q.graph).unwrap().len(), 1);
    }

    #[test]
    fn condition_k_examples() {
        assert!(!condition_k(&fixtures::single_loop()).unwrap());
        assert!(condition_k(&fixtures::arrow()).unwrap()); // acyclic: vacuous
        assert!(condition_k(&fixtures::rose_two_loops()).unwrap());

        // one cycle through v, but a detour loop at w pumps a second return
        let g = Graph::build(
            &["v", "w"],
            &[
                ("a", "v", "w", Multiplicity::ONE),
                ("b", "w", "v", Multiplicity::ONE),
                ("c", "w", "w", Multiplicity::ONE),
            ],
        )
        .unwrap();
        assert!(condition_k(&g).unwrap());

        // multiplicity-2 loop: two parallel closed simple paths
        let b2 = Graph::build(&["v"], &[("e", "v", "v", Multiplicity::Finite(2))]).unwrap();
        assert!(condition_k(&b2).unwrap());
    }

    #[test]
    fn condition_k_implies_condition_l_on_fuzzed_graphs() {
        for seed in 200..280u64 {
            let g = crate::oracle::random_graph(&crate::oracle::FuzzParams {
                max_vertices: 6,
                max_edge_specs: 10,
                omega_edge_probability: 0.2,
                count: 1,
                seed,
            })
            .unwrap();
            if condition_k(&g).unwrap() {
                assert!(condition_l(&g).unwrap(), "K without L at seed {seed}");
            }
        }
    }

    #[test]
    fn extreme_cycle_examples() {
        // 2-cycle with an extra edge into a sink: the sink cannot return
        let g = Graph::build(
            &["a", "b", "s"],
            &[
                ("e1", "a", "b", Multiplicity::ONE),
                ("e2", "b", "a", Multiplicity::ONE),
                ("e3", "a", "s", Multiplicity::ONE),
            ],
        )
        .unwrap();
        let c = &simple_cycles(&g)[0];
        assert!(!is_extreme_cycle(&g, c).unwrap());

        let r = fixtures::rose_two_loops();
        for c in simple_cycles(&r) {
            assert!(is_extreme_cycle(&r, &c).unwrap());
        }

        // exitless loop is not extreme (extreme requires exits)
        let b = fixtures::single_loop();
        let c = &simple_cycles(&b)[0];
        assert!(!is_extreme_cycle(&b, c).unwrap());
    }

    #[test]
    fn trichotomy_examples() {
        let a = fixtures::arrow();
        let r = trichotomy_report(&a).unwrap();
        assert!(r.is_total());
        assert!(matches!(
            r.witnesses[&"u".into()],
            ConnectionWitness::ToSink { .. }
        ));

        let b = fixtures::single_loop();
        let r = trichotomy_report(&b).unwrap();
        assert!(matches!(
            r.witnesses[&"v".into()],
            ConnectionWitness::ToNoExitCycle { .. }
        ));

        let c = fixtures::emitter_cycle();
        let r = trichotomy_report(&c).unwrap();
        assert!(r.is_total());
        for v in c.vertices() {
            assert!(matches!(
                r.witnesses[v],
                ConnectionWitness::ToSink { ref sink, .. } if sink == &VertexId::new("h")
            ));
        }
    }

    // Brute-force enumeration of vertex-simple closed walks, as an
    // independent oracle for simple_cycles.
    fn cycles_bruteforce(g: &Graph) -> BTreeSet<Vec<EdgeId>> {
        fn extend(
            g: &Graph,
            start: &VertexId,
            current: &VertexId,
            path: &mut Vec<EdgeId>,
            seen: &mut VertexSet,
            found: &mut BTreeSet<Vec<EdgeId>>,
        ) {
            for e in g.out_edges(current).unwrap() {
                if e.target == *start {
                    path.push(e.id.clone());
                    let canon = Cycle::from_edges(g, path.clone()).unwrap();
                    found.insert(canon.edge_ids().to_vec());
                    path.pop();
                } else if !seen.contains(&e.target) {
                    seen.insert(e.target.clone());
                    path.push(e.id.clone());
                    extend(g, start, &e.target, path, seen, found);
                    path.pop();
                    seen.remove(&e.target);
                }
            }
        }
        let mut found = BTreeSet::new();
        for v in g.vertices() {
            let mut seen: VertexSet = [v.clone()].into();
            extend(g, v, v, &mut Vec::new(), &mut seen, &mut found);
        }
        found
    }

    #[test]
    fn simple_cycles_matches_bruteforce_on_fuzzed_graphs() {
        for seed in 300..380u64 {
            let g = crate::oracle::random_graph(&crate::oracle::FuzzParams {
                max_vertices: 6,
                max_edge_specs: 12,
                omega_edge_probability: 0.15,
                count: 1,
                seed,
            })
            .unwrap();
            let fast: BTreeSet<Vec<EdgeId>> = simple_cycles(&g)
                .into_iter()
                .map(|c| c.edge_ids().to_vec())
                .collect();
            assert_eq!(
                fast,
                cycles_bruteforce(&g),
                "cycle sets differ at seed {seed}"
            );
        }
    }

    #[test]
    fn trichotomy_total_on_fuzzed_graphs() {
        for seed in 400..480u64 {
            let g = crate::oracle::random_graph(&crate::oracle::FuzzParams {
                max_vertices: 7,
                max_edge_specs: 12,
                omega_edge_probability: 0.25,
                count: 1,
                seed,
            })
            .unwrap();
            let r = trichotomy_report(&g).unwrap();
            assert!(r.is_total(), "unclassified vertices at seed {seed}");
        }
    }
}
