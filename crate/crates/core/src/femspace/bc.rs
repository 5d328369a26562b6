use crate::error::{Error, Result};
use crate::sparsela::SparseCsr;

/// Boundary condition on the whole rectangle boundary.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BoundaryCondition {
    /// Homogeneous Neumann (no flux).
    #[default]
    Neumann,
    /// `u = value` on the boundary.
    Dirichlet(f64),
}

/// Imposes `u_i = value` for `i ∈ boundary` by symmetric elimination.
///
/// Boundary rows become identity rows with `rhs_i = value`; boundary
/// columns of the remaining rows are moved into the right-hand side, so a
/// symmetric `A` stays symmetric.
pub fn apply_dirichlet(
    a: &SparseCsr,
    rhs: &[f64],
    boundary: &[usize],
    value: f64,
) -> Result<(SparseCsr, Vec<f64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::invalid(
            "dirichlet elimination needs a square system",
        ));
    }
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut fixed = vec![false; n];
    for &b in boundary {
        if b >= n {
            return Err(Error::invalid(format!("boundary index {b} out of range")));
        }
        fixed[b] = true;
    }
    let mut triplets = Vec::with_capacity(a.nnz());
    let mut new_rhs = rhs.to_vec();
    for i in 0..n {
        if fixed[i] {
            triplets.push((i, i, 1.0));
            new_rhs[i] = value;
            continue;
        }
        for (j, v) in a.row(i) {
            if fixed[j] {
                new_rhs[i] -= v * value;
            } else {
                triplets.push((i, j, v));
            }
        }
    }
    let out = SparseCsr::from_triplets(n, n, &triplets)?.with_symmetric(a.is_symmetric());
    Ok((out, new_rhs))
}
