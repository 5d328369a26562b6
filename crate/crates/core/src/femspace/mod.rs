//! P1 finite elements on a structured triangulation of a rectangle.

mod assembly;
mod bc;
mod eigen;
mod mesh;

pub use assembly::{
    assemble_mass, assemble_reaction, assemble_reaction_jacobian, assemble_stiffness, energy,
    gradient_norm_sq, integrate, l2_norm, FemMatrices,
};
pub use bc::{apply_dirichlet, BoundaryCondition};
pub use eigen::min_eigpair;
pub use mesh::{build_mesh, Field, Rect, TriMesh};

pub(crate) use assembly::{assemble_reaction_into, reaction_jacobian};
