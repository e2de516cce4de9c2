//! Streaming maximum-matching-size estimation.
//!
//! Vertex sampling, matching-size testers for insertion-only and dynamic
//! edge streams, the tester-combining meta estimator, an L0-sketch based
//! `O(sqrt n)` estimator, and generators for the hard input distributions
//! together with an exact matching oracle that checks their gap promises.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end and report emission live in the `matchest` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod estimator;
pub mod folklore;
pub mod graph;
pub mod hard;
pub mod hashing;
pub mod l0;
pub mod matching;
pub mod rng;
pub mod rs;
pub mod space;
pub mod stream;
pub mod tester;
pub mod util;

#[cfg(test)]
pub(crate) mod test_support;

pub use error::{Error, Result};
pub use graph::{Graph, InducedSubgraph, Matching, Vertex};
pub use matching::{brute_force_matching, greedy_maximal_matching, is_induced_matching, max_matching};
pub use rs::{validate_rs_graph, RsGraph};
pub use space::{SpaceAccounted, SpaceReport};
pub use stream::{EdgeStream, EventKind, StreamEvent, StreamMode};
