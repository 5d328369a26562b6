use super::assembly::FemMatrices;
use super::bc::BoundaryCondition;
use super::mesh::{Field, TriMesh};
use crate::error::{Error, Result};
use crate::sparsela::{cg_solve, LinearOptions, SparseCsr};

const MAX_ITER: usize = 500;

fn submatrix(a: &SparseCsr, keep: &[usize], map: &[Option<usize>]) -> SparseCsr {
    let mut t = Vec::new();
    for (ri, &i) in keep.iter().enumerate() {
        for (j, v) in a.row(i) {
            if let Some(cj) = map[j] {
                t.push((ri, cj, v));
            }
        }
    }
    SparseCsr::from_triplets(keep.len(), keep.len(), &t)
        .expect("indices in range")
        .with_symmetric(a.is_symmetric())
}

/// Smallest eigenpair of `D K v = λ M v`.
///
/// With Dirichlet conditions the problem is posed on interior vertices and
/// solved by inverse iteration; the returned mode is zero on the boundary,
/// M-normalized and positive in the interior. With Neumann conditions the
/// answer is `λ = 0` and the normalized constant.
pub fn min_eigpair(
    mesh: &TriMesh,
    mats: &FemMatrices,
    bc: BoundaryCondition,
    diffusion: f64,
) -> Result<(f64, Field)> {
    let n = mesh.num_vertices();
    if let BoundaryCondition::Neumann = bc {
        let c = 1.0 / mesh.bounds().area().sqrt();
        return Ok((0.0, Field::constant(n, c)));
    }
    let interior: Vec<usize> = (0..n).filter(|&v| !mesh.is_boundary(v)).collect();
    if interior.is_empty() {
        return Err(Error::invalid("mesh has no interior vertices"));
    }
    let mut map = vec![None; n];
    for (k, &v) in interior.iter().enumerate() {
        map[v] = Some(k);
    }
    let k = submatrix(&mats.stiffness, &interior, &map);
    let m = submatrix(&mats.mass, &interior, &map);
    let opts = LinearOptions {
        tol: 1e-11,
        max_iter: 20 * interior.len() + 100,
        ..Default::default()
    };

    let m_norm = |v: &[f64]| m.bilinear(v, v).sqrt();
    let mut v = vec![1.0; interior.len()];
    let s = 1.0 / m_norm(&v);
    v.iter_mut().for_each(|x| *x *= s);
    let mut lambda = f64::INFINITY;
    for it in 1..=MAX_ITER {
        let rhs = m.matvec(&v)?;
        let (mut x, rep) = cg_solve(&k, &rhs, Some(&v), &opts)?;
        if !rep.converged {
            return Err(Error::NonConvergence {
                what: "eigen inner solve",
                iterations: rep.iterations,
                residual: rep.residual,
            });
        }
        let s = 1.0 / m_norm(&x);
        x.iter_mut().for_each(|xi| *xi *= s);
        let new_lambda = k.bilinear(&x, &x);
        let change: f64 = x
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let lambda_change = (new_lambda - lambda).abs();
        v = x;
        lambda = new_lambda;
        if lambda_change <= 1e-13 * lambda && change <= 1e-10 {
            break;
        }
        if it == MAX_ITER && lambda_change > 1e-8 * lambda {
            return Err(Error::NonConvergence {
                what: "inverse iteration",
                iterations: it,
                residual: lambda_change / lambda,
            });
        }
    }
    let mut mode = vec![0.0; n];
    for (k, &vtx) in interior.iter().enumerate() {
        mode[vtx] = v[k];
    }
    Ok((diffusion * lambda, Field(mode)))
}
