//! Library surface of the `lpa` CLI: graph document parsing, the analysis
//! report schema, and DOT rendering. The binary in `main.rs` is a thin
//! dispatcher over these.

pub mod dot;
pub mod parse;
pub mod report;
