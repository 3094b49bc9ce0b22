//! Embeddings used throughout the tests and as CLI examples.

use crate::embedding::{load_embedding, SurfaceGraph};
use crate::orientations::Orientation;

pub const TORUS_2X2_JSON: &str = include_str!("../fixtures/torus_2x2.json");
pub const CUBE_JSON: &str = include_str!("../fixtures/cube.json");
pub const DIGON_JSON: &str = include_str!("../fixtures/digon.json");

/// `C2 x C2` on the torus. Faces 0..3 are named F1..F4; faces 0 and 3
/// together use every edge once, as do faces 1 and 2.
pub fn torus_2x2() -> SurfaceGraph {
    load_embedding(TORUS_2X2_JSON).expect("fixture is valid")
}

/// The cube on the sphere.
pub fn cube() -> SurfaceGraph {
    load_embedding(CUBE_JSON).expect("fixture is valid")
}

/// Two vertices joined by two parallel edges on the sphere.
pub fn digon() -> SurfaceGraph {
    load_embedding(DIGON_JSON).expect("fixture is valid")
}

/// Bitstrings of the eighteen (2,2,2,2)-orientations of [`torus_2x2`] under the
/// names D1..D18.
///
/// D13 has F1 and F4 counterclockwise and D14 is its reversal. D15 and D18 flip
/// one of F1, F4 in D13; D16 and D17 flip one of F2, F3 in D14. D1..D12 are the
/// rest in lexicographic order, so D1 and D2 differ on one vertical 2-cycle.
pub const TORUS_NAMED: [&str; 18] = [
    "00000000", "00010001", "00100010", "01000100", "01010101", "01110111", "10001000", "10101010",
    "10111011", "11011101", "11101110", "11111111", "11000011", "00111100", "00110011", "10011001",
    "01100110", "11001100",
];

/// Orientation named `D{label}` (1-based).
pub fn torus_named(label: usize) -> Orientation {
    TORUS_NAMED[label - 1]
        .parse()
        .expect("fixture literal")
}
