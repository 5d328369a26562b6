//! Element integrals and global assembly for P1 elements.
//!
//! Mass and stiffness use closed-form element matrices. Integrands of degree
//! three (the logistic term against a test function, its Jacobian, `∫u³`) use
//! the 4-point degree-3 rule, so every operator here is exact for P1 data.

use super::mesh::{Field, TriMesh};
use crate::error::Result;
use crate::sparsela::SparseCsr;

/// Barycentric points and weights (fractions of the element area) of the
/// degree-3 Strang–Fix rule.
const CUBIC_RULE: [([f64; 3], f64); 4] = [
    ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], -27.0 / 48.0),
    ([0.6, 0.2, 0.2], 25.0 / 48.0),
    ([0.2, 0.6, 0.2], 25.0 / 48.0),
    ([0.2, 0.2, 0.6], 25.0 / 48.0),
];

struct Element {
    nodes: [usize; 3],
    area: f64,
    /// Gradients of the barycentric coordinates.
    grads: [[f64; 2]; 3],
}

fn element(mesh: &TriMesh, t: usize) -> Element {
    let nodes = mesh.triangles()[t];
    let p = nodes.map(|v| mesh.vertices()[v]);
    let area = mesh.signed_area(t);
    let inv = 1.0 / (2.0 * area);
    let mut grads = [[0.0; 2]; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        grads[i] = [(p[j][1] - p[k][1]) * inv, (p[k][0] - p[j][0]) * inv];
    }
    Element { nodes, area, grads }
}

fn elements(mesh: &TriMesh) -> impl Iterator<Item = Element> + '_ {
    (0..mesh.triangles().len()).map(move |t| element(mesh, t))
}

fn local<const N: usize>(u: &[f64], nodes: [usize; N]) -> [f64; N] {
    nodes.map(|v| u[v])
}

fn assemble_matrix<F>(mesh: &TriMesh, mut element_matrix: F) -> SparseCsr
where
    F: FnMut(&Element) -> [[f64; 3]; 3],
{
    let mut triplets = Vec::with_capacity(9 * mesh.triangles().len());
    for e in elements(mesh) {
        let m = element_matrix(&e);
        for a in 0..3 {
            for b in 0..3 {
                triplets.push((e.nodes[a], e.nodes[b], m[a][b]));
            }
        }
    }
    let n = mesh.num_vertices();
    SparseCsr::from_triplets(n, n, &triplets)
        .expect("mesh indices are in range")
        .with_symmetric(true)
}

/// Consistent P1 mass matrix, element block `area/12 · [[2,1,1],[1,2,1],[1,1,2]]`.
pub fn assemble_mass(mesh: &TriMesh) -> SparseCsr {
    assemble_matrix(mesh, |e| {
        let d = e.area / 6.0;
        let o = e.area / 12.0;
        [[d, o, o], [o, d, o], [o, o, d]]
    })
}

/// P1 stiffness matrix `∫ ∇φ_i · ∇φ_j`.
pub fn assemble_stiffness(mesh: &TriMesh) -> SparseCsr {
    assemble_matrix(mesh, |e| {
        let mut k = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let g = e.grads;
                k[a][b] = e.area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
            }
        }
        k
    })
}

/// Load vector `∫ u(1 − u) φ_i` for the P1 function `u`.
pub fn assemble_reaction(mesh: &TriMesh, u: &Field) -> Result<Vec<f64>> {
    mesh.check_field(u.values())?;
    let mut out = vec![0.0; mesh.num_vertices()];
    assemble_reaction_into(mesh, u.values(), &mut out);
    Ok(out)
}

pub(crate) fn assemble_reaction_into(mesh: &TriMesh, u: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for e in elements(mesh) {
        let ul = local(u, e.nodes);
        for (lam, w) in CUBIC_RULE {
            let uq = lam[0] * ul[0] + lam[1] * ul[1] + lam[2] * ul[2];
            let f = w * e.area * uq * (1.0 - uq);
            for a in 0..3 {
                out[e.nodes[a]] += f * lam[a];
            }
        }
    }
}

/// Jacobian of [`assemble_reaction`]: `∫ (1 − 2u) φ_i φ_j`.
pub fn assemble_reaction_jacobian(mesh: &TriMesh, u: &Field) -> Result<SparseCsr> {
    mesh.check_field(u.values())?;
    Ok(reaction_jacobian(mesh, u.values()))
}

pub(crate) fn reaction_jacobian(mesh: &TriMesh, u: &[f64]) -> SparseCsr {
    assemble_matrix(mesh, |e| {
        let ul = local(u, e.nodes);
        let mut m = [[0.0; 3]; 3];
        for (lam, w) in CUBIC_RULE {
            let uq = lam[0] * ul[0] + lam[1] * ul[1] + lam[2] * ul[2];
            let f = w * e.area * (1.0 - 2.0 * uq);
            for a in 0..3 {
                for b in 0..3 {
                    m[a][b] += f * lam[a] * lam[b];
                }
            }
        }
        m
    })
}

/// `∫_Ω u`, equal to `1ᵀ M u` for P1 `u`.
pub fn integrate(mesh: &TriMesh, u: &Field) -> Result<f64> {
    mesh.check_field(u.values())?;
    let u = u.values();
    Ok(elements(mesh)
        .map(|e| {
            let l = local(u, e.nodes);
            e.area / 3.0 * (l[0] + l[1] + l[2])
        })
        .sum())
}

fn mass_form(mesh: &TriMesh, u: &[f64]) -> f64 {
    elements(mesh)
        .map(|e| {
            let l = local(u, e.nodes);
            let s = l[0] + l[1] + l[2];
            e.area / 12.0 * (l[0] * l[0] + l[1] * l[1] + l[2] * l[2] + s * s)
        })
        .sum()
}

fn stiffness_form(mesh: &TriMesh, u: &[f64]) -> f64 {
    elements(mesh)
        .map(|e| {
            let l = local(u, e.nodes);
            let mut grad = [0.0; 2];
            for a in 0..3 {
                grad[0] += l[a] * e.grads[a][0];
                grad[1] += l[a] * e.grads[a][1];
            }
            e.area * (grad[0] * grad[0] + grad[1] * grad[1])
        })
        .sum()
}

fn cubic_integral(mesh: &TriMesh, u: &[f64]) -> f64 {
    elements(mesh)
        .map(|e| {
            let l = local(u, e.nodes);
            CUBIC_RULE
                .iter()
                .map(|(lam, w)| {
                    let uq = lam[0] * l[0] + lam[1] * l[1] + lam[2] * l[2];
                    w * e.area * uq * uq * uq
                })
                .sum::<f64>()
        })
        .sum()
}

/// `‖u‖_{L²} = sqrt(uᵀ M u)`.
pub fn l2_norm(mesh: &TriMesh, u: &Field) -> Result<f64> {
    mesh.check_field(u.values())?;
    Ok(mass_form(mesh, u.values()).max(0.0).sqrt())
}

/// `∫ |∇u|²`.
pub fn gradient_norm_sq(mesh: &TriMesh, u: &Field) -> Result<f64> {
    mesh.check_field(u.values())?;
    Ok(stiffness_form(mesh, u.values()))
}

/// `E(u) = ∫ D/2 |∇u|² − r/2 u² + r/3 u³`.
pub fn energy(mesh: &TriMesh, u: &Field, diffusion: f64, rate: f64) -> Result<f64> {
    mesh.check_field(u.values())?;
    let u = u.values();
    Ok(
        0.5 * diffusion * stiffness_form(mesh, u) - 0.5 * rate * mass_form(mesh, u)
            + rate / 3.0 * cubic_integral(mesh, u),
    )
}

/// Assembled mass and stiffness operators for one mesh.
#[derive(Debug, Clone)]
pub struct FemMatrices {
    pub mass: SparseCsr,
    pub stiffness: SparseCsr,
}

impl FemMatrices {
    pub fn assemble(mesh: &TriMesh) -> Self {
        Self {
            mass: assemble_mass(mesh),
            stiffness: assemble_stiffness(mesh),
        }
    }
}
