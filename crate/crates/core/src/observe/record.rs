use crate::error::Result;
use crate::femspace::{energy, integrate, l2_norm, Field, TriMesh};
use crate::models::{ModelParams, StepStats};

/// Scalar observables of one time level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRow {
    pub t: f64,
    pub mass: f64,
    pub l2: f64,
    pub energy: f64,
    pub min_u: f64,
    pub max_u: f64,
    pub newton_iters: usize,
    pub cg_iters: usize,
}

pub fn record(
    mesh: &TriMesh,
    params: &ModelParams,
    t: f64,
    u: &Field,
    stats: &StepStats,
) -> Result<ObservableRow> {
    Ok(ObservableRow {
        t,
        mass: integrate(mesh, u)?,
        l2: l2_norm(mesh, u)?,
        energy: energy(mesh, u, params.diffusion, params.rate)?,
        min_u: u.min(),
        max_u: u.max(),
        newton_iters: stats.newton_iters,
        cg_iters: stats.linear_iters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::femspace::{build_mesh, Rect};

    #[test]
    fn constant_states() {
        let mesh = build_mesh(8, 8, Rect::symmetric_unit()).unwrap();
        let p = ModelParams::default();
        let one = Field::constant(mesh.num_vertices(), 1.0);
        let row = record(&mesh, &p, 0.5, &one, &StepStats::default()).unwrap();
        assert!((row.mass - 4.0).abs() < 1e-13);
        assert!((row.l2 - 2.0).abs() < 1e-13);
        assert!((row.energy + 10.0 / 3.0).abs() < 1e-12);
        assert_eq!((row.min_u, row.max_u), (1.0, 1.0));

        let zero = Field::constant(mesh.num_vertices(), 0.0);
        let row = record(&mesh, &p, 0.0, &zero, &StepStats::default()).unwrap();
        assert_eq!((row.mass, row.l2, row.energy), (0.0, 0.0, 0.0));
    }
}
