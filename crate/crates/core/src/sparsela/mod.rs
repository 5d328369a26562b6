//! Sparse linear algebra: CSR storage, Krylov solvers, Newton.

mod csr;
mod krylov;
mod newton;

pub use csr::SparseCsr;
pub use krylov::{cg_solve, minres_solve, LinearOptions, Preconditioner, SolveReport};
pub use newton::{newton_solve, solve_symmetric, NewtonOptions, NewtonReport};
