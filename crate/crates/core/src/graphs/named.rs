//! Built-in graphs used as a test vocabulary. External points are unlabeled;
//! call [`FeynmanGraph::with_labeled_externals`] to number them in the order listed.

use super::{FeynmanGraph, VertexKind};
use crate::error::{Error, Result};

use VertexKind::{Cross, External, Internal};

const E: VertexKind = External(None);

fn build(kinds: Vec<VertexKind>, edges: Vec<[usize; 2]>) -> FeynmanGraph {
    FeynmanGraph::new(kinds, edges).expect("built-in graphs are valid")
}

/// One-loop self-energy: two vertices joined by two propagators.
pub fn oneloop_se() -> FeynmanGraph {
    build(vec![E, Internal, Internal, E], vec![[0, 1], [1, 2], [1, 2], [2, 3]])
}

/// One-loop vertex correction.
pub fn triangle() -> FeynmanGraph {
    build(
        vec![E, Internal, Internal, Internal, E, E],
        vec![[0, 1], [1, 2], [1, 3], [2, 3], [2, 4], [3, 5]],
    )
}

/// Two-loop vertex graph with a triangle subgraph at the first external point:
/// triangle `a1 a2 a3`, then `a2–B`, `a3–C`, `B–C`; externals at `a1`, `B`, `C`.
pub fn nested2loop() -> FeynmanGraph {
    // 0:e 1:a1 2:a2 3:a3 4:B 5:C 6:e 7:e
    build(
        vec![E, Internal, Internal, Internal, Internal, Internal, E, E],
        vec![[0, 1], [1, 2], [2, 4], [1, 3], [3, 5], [2, 3], [4, 5], [4, 6], [5, 7]],
    )
}

/// Three-loop self-energy: a one-loop self-energy with a bubble inserted on each line.
pub fn threeloop_b() -> FeynmanGraph {
    // 0:e 1:X 2:u1 3:u2 4:w1 5:w2 6:Y 7:e
    build(
        vec![E, Internal, Internal, Internal, Internal, Internal, Internal, E],
        vec![[0, 1], [1, 2], [2, 3], [2, 3], [3, 6], [1, 4], [4, 5], [4, 5], [5, 6], [6, 7]],
    )
}

/// One-point tadpole: a vertex with a self-loop.
pub fn tadpole() -> FeynmanGraph {
    build(vec![E, Internal], vec![[0, 1], [1, 1]])
}

/// Free propagator between two external points.
pub fn free_propagator() -> FeynmanGraph {
    build(vec![E, E], vec![[0, 1]])
}

/// Two one-loop bubbles joined by a single propagator (one-particle reducible).
pub fn two_bubbles() -> FeynmanGraph {
    build(
        vec![E, Internal, Internal, Internal, Internal, E],
        vec![[0, 1], [1, 2], [1, 2], [2, 3], [3, 4], [3, 4], [4, 5]],
    )
}

/// Two-point graph with `E = 2`, `V = 6`: a bubble whose two lines are bridged by
/// a rung carrying a second bubble. Superficially convergent in four dimensions.
pub fn rung_bubble() -> FeynmanGraph {
    // 0:e 1:L 2:top 3:bottom 4:R 5:b1 6:b2 7:e
    build(
        vec![E, Internal, Internal, Internal, Internal, Internal, Internal, E],
        vec![[0, 1], [1, 2], [2, 4], [1, 3], [3, 4], [2, 5], [5, 6], [5, 6], [6, 3], [4, 7]],
    )
}

/// The contraction of the triangle in [`nested2loop`]: again a triangle.
pub fn nested2loop_quotient() -> FeynmanGraph {
    triangle()
}

/// One-loop self-energy with a cross of label `r` on each line.
pub fn crossed_se(r1: u8, r2: u8) -> FeynmanGraph {
    build(
        vec![E, Internal, Cross(r1), Cross(r2), Internal, E],
        vec![[0, 1], [1, 2], [2, 4], [1, 3], [3, 4], [4, 5]],
    )
}

pub const NAMES: &[&str] = &[
    "oneloop-se",
    "triangle",
    "nested2loop",
    "threeloop-b",
    "tadpole",
    "free-propagator",
    "two-bubbles",
    "rung-bubble",
];

pub fn by_name(name: &str) -> Result<FeynmanGraph> {
    Ok(match name {
        "oneloop-se" => oneloop_se(),
        "triangle" => triangle(),
        "nested2loop" => nested2loop(),
        "threeloop-b" => threeloop_b(),
        "tadpole" => tadpole(),
        "free-propagator" => free_propagator(),
        "two-bubbles" => two_bubbles(),
        "rung-bubble" => rung_bubble(),
        _ => return Err(Error::InvalidArgument(format!("unknown graph name {name}; known: {}", NAMES.join(", ")))),
    })
}
