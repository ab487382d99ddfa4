//! Toolkit for 2-cell graph embeddings on orientable closed surfaces,
//! represented as rotation systems.
//!
//! The crate decides whether an embedding extends to an embedding of a
//! Hamiltonian supergraph inside its regions ([`ham`]), detects the
//! counting obstructions that rule such extensions out ([`klee`]), and
//! constructs the Hamiltonian topological extension that always exists
//! once edges may be subdivided ([`topo`]). Exact arithmetic for the
//! hypercube region counts lives in [`cube`].
//!
//! All operations are pure functions on immutable [`CombEmbedding`]
//! values and iterate vertices, edges, darts and faces in ascending
//! identifier order, so every search and certificate is reproducible.

pub mod corpus;
pub mod cube;
pub mod edit;
pub mod embedding;
pub mod generators;
pub mod graph;
pub mod ham;
pub mod klee;
pub mod topo;
mod unionfind;

pub use embedding::{
    CombEmbedding, Dart, EdgeId, End, FaceId, FaceStructure, FaceWalk, SurfaceStats,
    ValidationReport, VertexId,
};
pub use graph::MultiGraph;
