use super::params::ModelParams;
use super::stepper::{StepState, StepStats};
use crate::error::Result;
use crate::femspace::{FemMatrices, Field, TriMesh};
use crate::fractime::TimeGrid;
use crate::observe::{record, ObservableRow};
use crate::scenarios::RunConfig;
use crate::sparsela::NewtonOptions;

/// A completed run: every level `u^0..u^N` with its observables.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub fields: Vec<Field>,
    pub rows: Vec<ObservableRow>,
    /// Per-step solver effort, `stats[n−1]` for level `n`.
    pub stats: Vec<StepStats>,
    pub alikhanov_violations: usize,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        self.grid.points()
    }

    pub fn last(&self) -> &Field {
        self.fields.last().expect("trajectory holds u^0")
    }

    pub fn masses(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mass).collect()
    }
}

/// Advances `u0` through every level of `grid`, calling `observer(n, u^n, row)`
/// after each level including `n = 0`. An observer error aborts the run.
pub fn simulate<F>(
    mesh: &TriMesh,
    mats: &FemMatrices,
    grid: &TimeGrid,
    params: ModelParams,
    u0: Field,
    newton: NewtonOptions,
    mut observer: F,
) -> Result<Trajectory>
where
    F: FnMut(usize, &Field, &ObservableRow) -> Result<()>,
{
    let mut state =
        StepState::new(mesh, mats, grid, params, u0.clone())?.with_newton_options(newton);
    let row0 = record(mesh, &params, grid.t(0), &u0, &StepStats::default())?;
    observer(0, &u0, &row0)?;
    let mut rows = vec![row0];
    let mut stats = Vec::with_capacity(grid.len());
    while !state.is_finished() {
        let n = state.next_index();
        let (u, st) = state.step()?;
        log::trace!(
            "step {n} t={:.6e} newton={} cg={}",
            grid.t(n),
            st.newton_iters,
            st.linear_iters
        );
        let row = record(mesh, &params, grid.t(n), &u, &st)?;
        observer(n, &u, &row)?;
        rows.push(row);
        stats.push(st);
    }
    let alikhanov_violations = state.alikhanov_violations();
    if alikhanov_violations > 0 {
        log::debug!("{alikhanov_violations} steps violated the discrete Alikhanov inequality");
    }
    Ok(Trajectory {
        grid: grid.clone(),
        fields: state.into_history().into_fields(),
        rows,
        stats,
        alikhanov_violations,
    })
}

/// Builds the discretization described by `config` and runs it, streaming rows to `observer`.
pub fn run_observed<F>(config: &RunConfig, observer: F) -> Result<Trajectory>
where
    F: FnMut(usize, &Field, &ObservableRow) -> Result<()>,
{
    let mesh = config.mesh()?;
    let grid = config.grid()?;
    let u0 = config.initial_field(&mesh)?;
    let mats = FemMatrices::assemble(&mesh);
    simulate(
        &mesh,
        &mats,
        &grid,
        config.physics,
        u0,
        NewtonOptions::default(),
        observer,
    )
}

pub fn run(config: &RunConfig) -> Result<Trajectory> {
    run_observed(config, |_, _, _| Ok(()))
}
