//! Cycle decompositions of simple Eulerian graphs within the Hajos bound
//! `⌊(n−1)/2⌋`.
//!
//! The crate provides:
//! - [`graph`]: simple-graph representation, Eulerian predicates and small
//!   induced-subgraph classification;
//! - [`graph6`]: the graph6 interchange format;
//! - [`colouring`]: legal colourings (every colour class one cycle) and the
//!   recolouring primitives;
//! - [`reductions`]: reducible-structure detection, reduction plans, the
//!   recolouring lifts and the full decomposition pipeline;
//! - [`exact`]: branch-and-bound minimum cycle decomposition, the base-case
//!   solver and test oracle;
//! - [`pathwidth`]: smooth path decompositions of width at most 6 and the
//!   boundary-vertex machinery;
//! - [`corpus`]: exhaustive and randomized instance generators.

pub mod canon;
pub mod colouring;
pub mod corpus;
pub mod exact;
pub mod graph;
pub mod graph6;
pub mod pathwidth;
pub mod reductions;

pub use colouring::{CycleDecomposition, LegalColouring};
pub use graph::{Graph, Vertex, VertexSet};
