//! Alpha-orientations of graphs embedded on orientable surfaces.
//!
//! The crate traces faces of rotation-system embeddings, enumerates
//! orientations with prescribed out-degrees, groups them into homology
//! classes, computes the minimum number of flips between two orientations
//! when some faces may not be flipped, and builds and checks the flip graphs
//! connecting them.

pub mod cli;
pub mod embedding;
pub mod fixtures;
pub mod flipgraph;
pub mod homology;
mod linalg;
pub mod orientations;
pub mod potential;
pub mod verify;

pub use embedding::{load_embedding, Dart, EmbeddingError, Face, SurfaceGraph};
pub use orientations::{FaceState, Orientation, OutDegreeSpec};
