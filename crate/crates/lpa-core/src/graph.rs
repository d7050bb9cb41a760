//! Directed multigraphs with ω-multiplicities.
//!
//! A [`Graph`] is a finite vertex set together with a finite list of edge
//! specs. An edge spec with multiplicity ω stands for countably many
//! parallel edges, which is how infinite emitters are modelled at desk
//! scale: the ideal-lattice machinery only ever distinguishes "finitely
//! many vs infinitely many edges into a region", and multiplicities
//! capture exactly that.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex identifier. Ordered so that vertex sets iterate deterministically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Self {
        VertexId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

/// Edge identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(String);

impl EdgeId {
    pub fn new(name: impl Into<String>) -> Self {
        EdgeId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId(s.to_owned())
    }
}

/// A finite set of vertices, ordered for deterministic iteration.
pub type VertexSet = BTreeSet<VertexId>;

/// Edge multiplicity: a positive integer or ω (countably infinite).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Multiplicity {
    /// A finite multiplicity; rejects zero.
    pub fn finite(value: u64) -> Result<Self, GraphError> {
        if value == 0 {
            Err(GraphError::ZeroMultiplicity)
        } else {
            Ok(Multiplicity::Finite(value))
        }
    }

    pub const ONE: Multiplicity = Multiplicity::Finite(1);

    pub fn is_omega(self) -> bool {
        matches!(self, Multiplicity::Omega)
    }

    /// Aggregation: finite + finite sums, anything + ω = ω.
    pub fn plus(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => {
                Multiplicity::Finite(a.saturating_add(b))
            }
            _ => Multiplicity::Omega,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::Omega => f.write_str("inf"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(k) => serializer.serialize_u64(*k),
            Multiplicity::Omega => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Tag(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(k) => Multiplicity::finite(k).map_err(D::Error::custom),
            Raw::Tag(s) if s == "inf" => Ok(Multiplicity::Omega),
            Raw::Tag(s) => Err(D::Error::custom(format!("bad multiplicity token {s:?}"))),
        }
    }
}

/// One edge class: `mult` parallel edges from `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
    pub mult: Multiplicity,
}

impl EdgeSpec {
    pub fn new(
        id: impl Into<EdgeId>,
        source: impl Into<VertexId>,
        target: impl Into<VertexId>,
        mult: Multiplicity,
    ) -> Self {
        EdgeSpec {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            mult,
        }
    }
}

/// Classification of a vertex by its outgoing edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    /// Emits no edges.
    Sink,
    /// Emits a non-empty finite set of edges.
    Regular,
    /// Emits infinitely many edges (some outgoing spec has multiplicity ω).
    InfiniteEmitter,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("no such vertex: {0}")]
    NoSuchVertex(VertexId),
    #[error("duplicate vertex identifier: {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge identifier: {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("graph must have at least one vertex")]
    EmptyVertexSet,
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("downward directedness is defined for non-empty sets")]
    EmptySubset,
}

/// Finite directed multigraph. Immutable after construction; all analysis
/// operations are pure, so a `Graph` can be shared across threads freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeSpec>,
    index: BTreeMap<VertexId, usize>,
    out: Vec<Vec<usize>>,
    // reach[i][j]: reflexive-transitive reachability by vertex position.
    reach: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<EdgeSpec>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_ids = BTreeSet::new();
        let mut out = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            if !edge_ids.insert(e.id.clone()) {
                return Err(GraphError::DuplicateEdge(e.id.clone()));
            }
            let src = *index
                .get(&e.source)
                .ok_or_else(|| GraphError::UnknownEndpoint {
                    edge: e.id.clone(),
                    vertex: e.source.clone(),
                })?;
            index
                .get(&e.target)
                .ok_or_else(|| GraphError::UnknownEndpoint {
                    edge: e.id.clone(),
                    vertex: e.target.clone(),
                })?;
            out[src].push(k);
        }
        let reach = closure(&vertices, &edges, &index, &out);
        Ok(Graph {
            vertices,
            edges,
            index,
            out,
            reach,
        })
    }

    /// Convenience constructor from string names and `(id, src, dst, mult)` tuples.
    pub fn build(
        vertices: &[&str],
        edges: &[(&str, &str, &str, Multiplicity)],
    ) -> Result<Self, GraphError> {
        Graph::new(
            vertices.iter().map(|v| VertexId::new(*v)).collect(),
            edges
                .iter()
                .map(|(id, s, t, m)| EdgeSpec {
                    id: EdgeId::new(*id),
                    source: VertexId::new(*s),
                    target: VertexId::new(*t),
                    mult: *m,
                })
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeSpec] {
        &self.edges
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().cloned().collect()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&EdgeSpec> {
        self.edges.iter().find(|e| &e.id == id)
    }

    fn pos(&self, v: &VertexId) -> Result<usize, GraphError> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| GraphError::NoSuchVertex(v.clone()))
    }

    /// Outgoing edge specs of `v`, in edge declaration order.
    pub fn out_edges(&self, v: &VertexId) -> Result<Vec<&EdgeSpec>, GraphError> {
        let i = self.pos(v)?;
        Ok(self.out[i].iter().map(|&k| &self.edges[k]).collect())
    }

    /// Sink / Regular / InfiniteEmitter, by total outgoing multiplicity.
    pub fn vertex_kind(&self, v: &VertexId) -> Result<VertexKind, GraphError> {
        let i = self.pos(v)?;
        if self.out[i].is_empty() {
            return Ok(VertexKind::Sink);
        }
        if self.out[i].iter().any(|&k| self.edges[k].mult.is_omega()) {
            return Ok(VertexKind::InfiniteEmitter);
        }
        Ok(VertexKind::Regular)
    }

    /// `u ≥ v`: there is a (possibly empty) path from `u` to `v`.
    /// Multiplicities are ignored; ω counts as at least one edge.
    pub fn reaches(&self, u: &VertexId, v: &VertexId) -> Result<bool, GraphError> {
        Ok(self.reach[self.pos(u)?][self.pos(v)?])
    }

    /// All vertices reachable from `u`, including `u` itself.
    pub fn reachable_from(&self, u: &VertexId) -> Result<VertexSet, GraphError> {
        let i = self.pos(u)?;
        Ok(self.reach[i]
            .iter()
            .enumerate()
            .filter(|(_, r)| **r)
            .map(|(j, _)| self.vertices[j].clone())
            .collect())
    }

    /// Does every pair `u, v ∈ D` have a common `w ∈ D` with `u ≥ w` and
    /// `v ≥ w`? Reachability is computed in the full graph.
    pub fn is_downward_directed(&self, d: &VertexSet) -> Result<bool, GraphError> {
        if d.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        let idx: Vec<usize> = d.iter().map(|v| self.pos(v)).collect::<Result<_, _>>()?;
        for &u in &idx {
            for &v in &idx {
                if u > v {
                    continue; // symmetric in u, v
                }
                let ok = idx.iter().any(|&w| self.reach[u][w] && self.reach[v][w]);
                if !ok {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A shortest edge path from `u` to `v`, if any (empty path when `u == v`).
    pub fn path(&self, u: &VertexId, v: &VertexId) -> Result<Option<Vec<EdgeId>>, GraphError> {
        let start = self.pos(u)?;
        let goal = self.pos(v)?;
        if start == goal {
            return Ok(Some(Vec::new()));
        }
        let mut prev: Vec<Option<usize>> = vec![None; self.vertices.len()];
        let mut queue = std::collections::VecDeque::from([start]);
        let mut seen = vec![false; self.vertices.len()];
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            for &k in &self.out[i] {
                let j = self.index[&self.edges[k].target];
                if !seen[j] {
                    seen[j] = true;
                    prev[j] = Some(k);
                    if j == goal {
                        let mut path = Vec::new();
                        let mut cur = goal;
                        while cur != start {
                            let k = prev[cur].expect("bfs predecessor");
                            path.push(self.edges[k].id.clone());
                            cur = self.index[&self.edges[k].source];
                        }
                        path.reverse();
                        return Ok(Some(path));
                    }
                    queue.push_back(j);
                }
            }
        }
        Ok(None)
    }

    /// Strongly connected components as vertex sets (Tarjan, iterative).
    pub fn sccs(&self) -> Vec<VertexSet> {
        let n = self.vertices.len();
        let mut idx = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next = 0usize;
        let mut comps = Vec::new();

        for root in 0..n {
            if idx[root] != usize::MAX {
                continue;
            }
            // frame: (vertex, next out-edge position)
            let mut frames = vec![(root, 0usize)];
            while let Some(&mut (v, ref mut ei)) = frames.last_mut() {
                if *ei == 0 {
                    idx[v] = next;
                    low[v] = next;
                    next += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if let Some(&k) = self.out[v].get(*ei) {
                    *ei += 1;
                    let w = self.index[&self.edges[k].target];
                    if idx[w] == usize::MAX {
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(idx[w]);
                    }
                } else {
                    if low[v] == idx[v] {
                        let mut comp = VertexSet::new();
                        loop {
                            let w = stack.pop().expect("scc stack");
                            on_stack[w] = false;
                            comp.insert(self.vertices[w].clone());
                            if w == v {
                                break;
                            }
                        }
                        comps.push(comp);
                    }
                    frames.pop();
                    if let Some(&mut (p, _)) = frames.last_mut() {
                        low[p] = low[p].min(low[v]);
                    }
                }
            }
        }
        comps
    }

    /// Validates that `s ⊆ E⁰`, naming the offending vertex otherwise.
    pub fn check_subset(&self, s: &VertexSet) -> Result<(), GraphError> {
        for v in s {
            self.pos(v)?;
        }
        Ok(())
    }
}

fn closure(
    vertices: &[VertexId],
    edges: &[EdgeSpec],
    index: &BTreeMap<VertexId, usize>,
    out: &[Vec<usize>],
) -> Vec<Vec<bool>> {
    let n = vertices.len();
    let mut reach = vec![vec![false; n]; n];
    for start in 0..n {
        let row = &mut reach[start];
        row[start] = true;
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for &k in &out[i] {
                let j = index[&edges[k].target];
                if !row[j] {
                    row[j] = true;
                    queue.push(j);
                }
            }
        }
    }
    reach
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn vertex_kind_examples() {
        let a = fixtures::arrow();
        assert_eq!(a.vertex_kind(&"v".into()).unwrap(), VertexKind::Sink);
        assert_eq!(a.vertex_kind(&"u".into()).unwrap(), VertexKind::Regular);

        let c = fixtures::emitter_cycle();
        assert_eq!(
            c.vertex_kind(&"w".into()).unwrap(),
            VertexKind::InfiniteEmitter
        );
        assert_eq!(c.vertex_kind(&"h".into()).unwrap(), VertexKind::Sink);
        assert_eq!(c.vertex_kind(&"v".into()).unwrap(), VertexKind::Regular);

        assert!(matches!(
            a.vertex_kind(&"zz".into()),
            Err(GraphError::NoSuchVertex(_))
        ));
    }

    #[test]
    fn reaches_examples() {
        let a = fixtures::arrow();
        assert!(a.reaches(&"u".into(), &"u".into()).unwrap());
        assert!(!a.reaches(&"v".into(), &"u".into()).unwrap());

        let c = fixtures::emitter_cycle();
        assert!(c.reaches(&"v".into(), &"h".into()).unwrap()); // v → w → h
        assert!(!c.reaches(&"h".into(), &"v".into()).unwrap());
    }

    #[test]
    fn downward_directed_examples() {
        let a = fixtures::arrow();
        assert!(a.is_downward_directed(&a.vertex_set()).unwrap());

        let c = fixtures::emitter_cycle();
        let d: VertexSet = ["w".into(), "v".into()].into();
        assert!(c.is_downward_directed(&d).unwrap());

        let single: VertexSet = ["h".into()].into();
        assert!(c.is_downward_directed(&single).unwrap());

        assert!(matches!(
            c.is_downward_directed(&VertexSet::new()),
            Err(GraphError::EmptySubset)
        ));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            Graph::new(vec![], vec![]),
            Err(GraphError::EmptyVertexSet)
        ));
        let dup = Graph::build(&["a", "a"], &[]);
        assert!(matches!(dup, Err(GraphError::DuplicateVertex(_))));
        let dangling = Graph::build(&["a"], &[("e", "a", "b", Multiplicity::ONE)]);
        assert!(matches!(dangling, Err(GraphError::UnknownEndpoint { .. })));
        assert!(Multiplicity::finite(0).is_err());
    }

    #[test]
    fn reach_is_reflexive_and_transitive_on_fuzzed_graphs() {
        for seed in 0..40u64 {
            let g = crate::oracle::random_graph(&crate::oracle::FuzzParams {
                max_vertices: 7,
                max_edge_specs: 12,
                omega_edge_probability: 0.2,
                count: 1,
                seed,
            })
            .unwrap();
            let vs = g.vertices();
            for u in vs {
                assert!(g.reaches(u, u).unwrap());
                for v in vs {
                    for w in vs {
                        if g.reaches(u, v).unwrap() && g.reaches(v, w).unwrap() {
                            assert!(g.reaches(u, w).unwrap());
                        }
                    }
                }
            }
            // every singleton is downward directed
            for v in vs {
                let d: VertexSet = [v.clone()].into();
                assert!(g.is_downward_directed(&d).unwrap());
            }
        }
    }

    #[test]
    fn path_finds_shortest_witness() {
        let c = fixtures::emitter_cycle();
        let p = c.path(&"v".into(), &"h".into()).unwrap().unwrap();
        assert_eq!(p.len(), 2);
        assert!(c.path(&"h".into(), &"v".into()).unwrap().is_none());
        assert_eq!(c.path(&"v".into(), &"v".into()).unwrap().unwrap().len(), 0);
    }

    #[test]
    fn sccs_of_emitter_cycle() {
        let c = fixtures::emitter_cycle();
        let comps = c.sccs();
        assert_eq!(comps.len(), 2);
        let sizes: Vec<usize> = {
            let mut s: Vec<usize> = comps.iter().map(|c| c.len()).collect();
            s.sort();
            s
        };
        assert_eq!(sizes, vec![1, 2]);
    }
}
