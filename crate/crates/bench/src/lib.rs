//! Shared inputs for the benchmarks in `benches/`.

use std::path::PathBuf;

use sgh_core::io::{parse_graph, GraphFile};

/// Loads a graph from the workspace `fixtures/` directory.
pub fn fixture(name: &str) -> GraphFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_graph(&src).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
