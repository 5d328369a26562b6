//! Shared fixtures for the benchmarks.

use fracfisher::femspace::{build_mesh, FemMatrices, Field, Rect, TriMesh};
use fracfisher::scenarios::InitialCondition;

/// Structured mesh on `(−1, 1)²` with its assembled matrices.
pub fn square(n: usize) -> (TriMesh, FemMatrices) {
    let mesh = build_mesh(n, n, Rect::symmetric_unit()).expect("n > 0");
    let mats = FemMatrices::assemble(&mesh);
    (mesh, mats)
}

/// The default circle initial state with `ε = 10h`.
pub fn circle(mesh: &TriMesh) -> Field {
    InitialCondition::default()
        .build(mesh, 10.0 * mesh.h())
        .expect("default circle fits the square")
}
