//! Chord-rich cycles from random walks in almost-regular expanders.
//!
//! The crate extracts a certified almost-regular bipartite expander from a
//! dense graph, runs seeded random walks in it, and closes self-avoiding
//! walks into cycles whose chords are counted exactly against the host.

// Parameter checks negate comparisons so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cleanup;
pub mod corpus;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod profile;
pub mod rng;
pub mod spectral;
pub mod star_forest;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Graph, Side, VertexSet};
pub use profile::{ConstantsProfile, Preset};
