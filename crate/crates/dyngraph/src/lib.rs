//! Fully dynamic graph algorithms: (Δ+1)-vertex coloring and maximal
//! matching under single-edge insertions and deletions, together with the
//! instance generators that stress them, a brute-force oracle that
//! machine-checks them, and a benchmark harness that times them.
//!
//! The vertex set is fixed at construction and the edge set starts empty;
//! algorithms consume validated [`graph::UpdateSequence`]s. See the `book/`
//! guide for a walk through the algorithms and the harness, and `bench`
//! (this crate's binary) for the command-line interface.

use thiserror::Error;

pub mod algo;
pub mod bench;
pub mod coloring;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod oracle;

/// Runtime failure of an algorithm while applying an update.
#[derive(Debug, Error, PartialEq)]
pub enum UpdateError {
    /// A recolor cascade exceeded its configured recursion-depth cap; the
    /// update did not terminate.
    #[error("non-terminating cascade: recursion depth exceeded the cap of {cap}")]
    CascadeDepthExceeded { cap: usize },
}

/// Failure to construct an algorithm instance.
#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("per-vertex count tables need {required} entries, over the budget of {budget}")]
    CountTableTooLarge { required: usize, budget: usize },
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
}

// Keep the book's code samples compiling: every fenced Rust block in the
// guide runs as a doc-test of this crate.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            #[allow(dead_code)]
            struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(UpdateModel, "../../../book/src/update-model.md");
    chapter!(Coloring, "../../../book/src/coloring.md");
    chapter!(Matching, "../../../book/src/matching.md");
    chapter!(RankMatching, "../../../book/src/rank-matching.md");
    chapter!(Oracles, "../../../book/src/oracles.md");
    chapter!(Generators, "../../../book/src/generators.md");
    chapter!(Benchmarking, "../../../book/src/benchmarking.md");
}
