//! Solvers for the time-fractional Fisher–KPP equation.
//!
//! Two formulations are supported on a common discretization (graded L1
//! time stepping, P1 finite elements on a structured triangulation):
//!
//! * [`models::ModelKind::Consistent`]: `C∂^α u = DΔu + r g_{1−α} * (u − u²)`,
//!   the convolved form of the Riemann–Liouville-in-diffusion model.
//! * [`models::ModelKind::CaputoInTime`]: `C∂^α u = DΔu + r (u − u²)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`fractime`]: kernels, graded grids, quadrature weights, L1
//!   coefficients, the Gamma and Mittag–Leffler functions.
//! - [`sparsela`]: CSR matrices, CG / MINRES and a damped Newton driver.
//! - [`femspace`]: mesh, assembly, boundary conditions, eigenpairs.
//! - [`models`]: the two time steppers and a 0-D scalar mode.
//! - [`scenarios`]: initial conditions and the run configuration format.
//! - [`observe`]: observables, writers, model comparison and the oracle
//!   suite behind `fracfisher verify`.

// NaN-rejecting `!(x > 0.0)` checks are deliberate; index loops mirror the
// element formulas.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::excessive_precision
)]

pub mod error;
pub mod femspace;
pub mod fractime;
pub mod models;
pub mod observe;
pub mod scenarios;
pub mod sparsela;

pub use error::{Error, Result};
pub use femspace::{FemMatrices, Field, TriMesh};
pub use fractime::TimeGrid;
pub use models::{History, ModelKind, ModelParams, ReactionMode, Trajectory};
pub use scenarios::RunConfig;
pub use sparsela::{SolveReport, SparseCsr};
