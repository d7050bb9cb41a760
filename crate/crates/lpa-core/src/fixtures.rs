//! Small named graphs used throughout the test suites and docs.

use crate::graph::{Graph, Multiplicity};

/// Two vertices `u → v`. Acyclic, one sink.
pub fn arrow() -> Graph {
    Graph::build(&["u", "v"], &[("e0", "u", "v", Multiplicity::ONE)]).unwrap()
}

/// One vertex `v` with a single loop. The loop has no exit.
pub fn single_loop() -> Graph {
    Graph::build(&["v"], &[("e0", "v", "v", Multiplicity::ONE)]).unwrap()
}

/// Vertices `w, h, v` with `w →ω h`, `w → v`, `v → w`.
/// `w` is an infinite emitter, `h` a sink, and `w,v` form a cycle with an exit.
pub fn emitter_cycle() -> Graph {
    Graph::build(
        &["w", "h", "v"],
        &[
            ("e0", "w", "h", Multiplicity::Omega),
            ("e1", "w", "v", Multiplicity::ONE),
            ("e2", "v", "w", Multiplicity::ONE),
        ],
    )
    .unwrap()
}

/// Two isolated sinks `a, b` with no edges.
pub fn two_sinks() -> Graph {
    Graph::build(&["a", "b"], &[]).unwrap()
}

/// One vertex with two loops.
pub fn rose_two_loops() -> Graph {
    Graph::build(
        &["v"],
        &[
            ("e0", "v", "v", Multiplicity::ONE),
            ("e1", "v", "v", Multiplicity::ONE),
        ],
    )
    .unwrap()
}
