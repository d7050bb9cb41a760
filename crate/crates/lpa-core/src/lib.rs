//! Prime spectrum classification for Leavitt path algebras of directed
//! graphs, done entirely through graph combinatorics.
//!
//! The algebra `L_K(E)` of a graph `E` never appears element-wise: graded
//! ideals are admissible pairs `(H,S)` of hereditary saturated vertex sets
//! with breaking vertices, non-graded primes are cycle/polynomial families,
//! and every classifier (primitive, strongly primitive, locally closed,
//! completely irreducible, rational) is a decision procedure on the graph.
//!
//! Structure:
//! - [`graph`]: multigraphs with ω-multiplicities, reachability, downward
//!   directedness.
//! - [`ideal`]: hereditary saturated sets, admissible pairs, quotients.
//! - [`cycles`]: cycle enumeration, exits, Conditions (L)/(K), extreme
//!   cycles, the finite-graph trichotomy.
//! - [`spectrum`]: spectrum enumeration and the characterization-based classifiers.
//! - [`oracle`]: independent brute-force cross-checks and the fuzz harness.
//! - [`certs`]: lazily generated infinite graphs with window-checked
//!   witness certificates.

pub mod certs;
pub mod cycles;
pub mod fixtures;
pub mod graph;
pub mod ideal;
pub mod oracle;
pub mod spectrum;

pub use graph::{
    EdgeId, EdgeSpec, Graph, GraphError, Multiplicity, VertexId, VertexKind, VertexSet,
};
