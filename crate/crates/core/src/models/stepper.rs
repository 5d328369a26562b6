//! One-step solvers for both fully discrete systems.
//!
//! With `a_m = a_m^(n)`, `b_j = b_j^(n)` and `h = Σ_{k<n} a_{n−k} (u^k − u^{k−1})`:
//!
//! consistent, explicit history
//!   `(a_0 M + D K) u^n = M (a_0 u^{n−1} − h) + r Σ_{j<n} b_j R^j`
//!
//! consistent, implicit last interval
//!   `(a_0 M + D K) u^n − r b_{n−1} R(u^n) = M (a_0 u^{n−1} − h) + r Σ_{j<n−1} b_j R^j`
//!
//! Caputo in time
//!   `(a_0 M + D K) u^n − r R(u^n) = M (a_0 u^{n−1} − h)`

use super::history::History;
use super::params::{ModelKind, ModelParams, ReactionMode};
use crate::error::{Error, Result};
use crate::femspace::{
    apply_dirichlet, assemble_reaction_into, reaction_jacobian, BoundaryCondition, FemMatrices,
    Field, TriMesh,
};
use crate::fractime::{conv_weights, TimeGrid};
use crate::sparsela::{cg_solve, newton_solve, NewtonOptions, SparseCsr};

/// Solver effort spent on one step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub newton_iters: usize,
    pub linear_iters: usize,
    pub minres_fallbacks: usize,
    /// Final residual of the per-step system.
    pub residual: f64,
}

/// Time-stepping state: discretization, parameters and the full history.
#[derive(Debug, Clone)]
pub struct StepState<'a> {
    mesh: &'a TriMesh,
    mats: &'a FemMatrices,
    grid: &'a TimeGrid,
    params: ModelParams,
    history: History,
    newton: NewtonOptions,
    l2_sq: Vec<f64>,
    alikhanov_violations: usize,
}

impl<'a> StepState<'a> {
    /// Starts from `u^0`.
    pub fn new(
        mesh: &'a TriMesh,
        mats: &'a FemMatrices,
        grid: &'a TimeGrid,
        params: ModelParams,
        u0: Field,
    ) -> Result<Self> {
        params.validate()?;
        mesh.check_field(u0.values())?;
        let mut state = Self {
            mesh,
            mats,
            grid,
            params,
            history: History::new(),
            newton: NewtonOptions::default(),
            l2_sq: Vec::new(),
            alikhanov_violations: 0,
        };
        state.commit(u0);
        Ok(state)
    }

    pub fn with_newton_options(mut self, opts: NewtonOptions) -> Self {
        self.newton = opts;
        self
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &TimeGrid {
        self.grid
    }

    pub fn mesh(&self) -> &TriMesh {
        self.mesh
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn into_history(self) -> History {
        self.history
    }

    /// Index of the next level to compute.
    pub fn next_index(&self) -> usize {
        self.history.len()
    }

    pub fn is_finished(&self) -> bool {
        self.next_index() > self.grid.len()
    }

    /// Steps at which the discrete Alikhanov inequality
    /// `(∂^α u, u) ≥ ½ ∂^α ‖u‖²` failed (diagnostic only).
    pub fn alikhanov_violations(&self) -> usize {
        self.alikhanov_violations
    }

    fn commit(&mut self, u: Field) {
        let mut r = vec![0.0; u.len()];
        assemble_reaction_into(self.mesh, u.values(), &mut r);
        self.l2_sq
            .push(self.mats.mass.bilinear(u.values(), u.values()));
        self.history.push(u, r);
    }

    /// Advances one level with the configured model and returns `u^n`.
    pub fn step(&mut self) -> Result<(Field, StepStats)> {
        let n = self.next_index();
        self.grid.check_step(n)?;
        let out = self.l1_parts(n).and_then(|parts| {
            let (u, stats) = match self.params.model {
                ModelKind::Consistent => self.solve_consistent(n, &parts)?,
                ModelKind::CaputoInTime => self.solve_caputo(&parts)?,
            };
            Ok((u, stats, parts))
        });
        let (u, stats, parts) = out.map_err(|e| Error::Step {
            step: n,
            t: self.grid.t(n),
            source: Box::new(e),
        })?;
        self.check_alikhanov(n, &u, &parts);
        self.commit(u.clone());
        Ok((u, stats))
    }

    fn l1_parts(&self, n: usize) -> Result<L1Parts> {
        let w = conv_weights(self.grid, self.params.alpha, n)?;
        let a = |k: usize| w.b[k - 1] / self.grid.dt(k);
        let a0 = a(n);
        let dofs = self.mesh.num_vertices();
        let mut h = vec![0.0; dofs];
        for k in 1..n {
            let c = a(k);
            if c == 0.0 {
                continue;
            }
            let (uk, ukm) = (
                self.history.field(k).values(),
                self.history.field(k - 1).values(),
            );
            for i in 0..dofs {
                h[i] += c * (uk[i] - ukm[i]);
            }
        }
        let prev = self.history.field(n - 1).values();
        let v: Vec<f64> = prev.iter().zip(&h).map(|(p, hi)| a0 * p - hi).collect();
        let rhs = self.mats.mass.matvec(&v)?;
        Ok(L1Parts { a0, b: w.b, rhs, h })
    }

    fn add_reaction_history(&self, rhs: &mut [f64], b: &[f64], upto: usize) {
        let r = self.params.rate;
        if r == 0.0 {
            return;
        }
        for (j, &bj) in b.iter().enumerate().take(upto) {
            let c = r * bj;
            if c == 0.0 {
                continue;
            }
            for (x, rj) in rhs.iter_mut().zip(self.history.reaction(j)) {
                *x += c * rj;
            }
        }
    }

    fn system_matrix(&self, a0: f64) -> Result<SparseCsr> {
        self.mats
            .mass
            .linear_combination(a0, &self.mats.stiffness, self.params.diffusion)
    }

    fn solve_consistent(&self, n: usize, parts: &L1Parts) -> Result<(Field, StepStats)> {
        let b = &parts.b;
        let mut rhs = parts.rhs.clone();
        let lhs = self.system_matrix(parts.a0)?;
        match self.params.reaction_mode {
            ReactionMode::ExplicitHistory => {
                self.add_reaction_history(&mut rhs, b, n);
                self.solve_linear(&lhs, rhs)
            }
            ReactionMode::ImplicitLastInterval => {
                self.add_reaction_history(&mut rhs, b, n - 1);
                self.solve_nonlinear(&lhs, &rhs, self.params.rate * b[n - 1])
            }
        }
    }

    fn solve_caputo(&self, parts: &L1Parts) -> Result<(Field, StepStats)> {
        let lhs = self.system_matrix(parts.a0)?;
        self.solve_nonlinear(&lhs, &parts.rhs, self.params.rate)
    }

    fn solve_linear(&self, lhs: &SparseCsr, rhs: Vec<f64>) -> Result<(Field, StepStats)> {
        let (a, rhs) = match self.params.bc {
            BoundaryCondition::Neumann => (None, rhs),
            BoundaryCondition::Dirichlet(g) => {
                let (a, r) = apply_dirichlet(lhs, &rhs, self.mesh.boundary_vertices(), g)?;
                (Some(a), r)
            }
        };
        let a = a.as_ref().unwrap_or(lhs);
        let guess = self.history.last().map(|f| f.values().to_vec());
        let (u, rep) = cg_solve(a, &rhs, guess.as_deref(), &self.newton.linear)?;
        if !rep.converged {
            return Err(Error::NonConvergence {
                what: "conjugate gradients",
                iterations: rep.iterations,
                residual: rep.residual,
            });
        }
        let stats = StepStats {
            newton_iters: 0,
            linear_iters: rep.iterations,
            minres_fallbacks: 0,
            residual: rep.residual,
        };
        Ok((Field(u), stats))
    }

    /// Newton on `lhs·u − coef·R(u) − rhs = 0`.
    fn solve_nonlinear(
        &self,
        lhs: &SparseCsr,
        rhs: &[f64],
        coef: f64,
    ) -> Result<(Field, StepStats)> {
        let mesh = self.mesh;
        let boundary = mesh.boundary_vertices();
        let dirichlet = match self.params.bc {
            BoundaryCondition::Dirichlet(g) => Some(g),
            BoundaryCondition::Neumann => None,
        };
        let mut x0 = self
            .history
            .last()
            .expect("history holds u^0")
            .values()
            .to_vec();
        if let Some(g) = dirichlet {
            for &v in boundary {
                x0[v] = g;
            }
        }
        let mut reaction = vec![0.0; x0.len()];
        let residual = |u: &[f64]| -> Vec<f64> {
            let mut f = lhs.matvec(u).expect("square system");
            if coef != 0.0 {
                assemble_reaction_into(mesh, u, &mut reaction);
                for (fi, ri) in f.iter_mut().zip(&reaction) {
                    *fi -= coef * ri;
                }
            }
            for (fi, bi) in f.iter_mut().zip(rhs) {
                *fi -= bi;
            }
            if let Some(g) = dirichlet {
                for &v in boundary {
                    f[v] = u[v] - g;
                }
            }
            f
        };
        let jacobian = |u: &[f64]| -> SparseCsr {
            let j = if coef != 0.0 {
                lhs.linear_combination(1.0, &reaction_jacobian(mesh, u), -coef)
                    .expect("same mesh")
            } else {
                lhs.clone()
            };
            match dirichlet {
                Some(_) => {
                    apply_dirichlet(&j, &vec![0.0; u.len()], boundary, 0.0)
                        .expect("square system")
                        .0
                }
                None => j,
            }
        };
        let (u, rep) = newton_solve(residual, jacobian, &x0, &self.newton)?;
        let stats = StepStats {
            newton_iters: rep.iterations,
            linear_iters: rep.linear_iterations,
            minres_fallbacks: rep.minres_fallbacks,
            residual: rep.residual,
        };
        Ok((Field(u), stats))
    }

    fn check_alikhanov(&mut self, n: usize, u: &Field, parts: &L1Parts) {
        let un = u.values();
        let prev = self.history.field(n - 1).values();
        let incr: Vec<f64> = un
            .iter()
            .zip(prev)
            .zip(&parts.h)
            .map(|((x, p), h)| parts.a0 * (x - p) + h)
            .collect();
        let lhs = self.mats.mass.bilinear(un, &incr);
        let un_sq = self.mats.mass.bilinear(un, un);
        let mut rhs = 0.0;
        for k in 1..=n {
            let now = if k == n { un_sq } else { self.l2_sq[k] };
            rhs += 0.5 * parts.b[k - 1] / self.grid.dt(k) * (now - self.l2_sq[k - 1]);
        }
        if lhs < rhs - 1e-10 * rhs.abs().max(1.0) {
            self.alikhanov_violations += 1;
            log::debug!(
                "discrete Alikhanov inequality violated at step {n}: {lhs:.6e} < {rhs:.6e}"
            );
        }
    }
}

/// L1 pieces shared by all step variants.
struct L1Parts {
    a0: f64,
    /// `b_0^(n)..b_{n−1}^(n)`.
    b: Vec<f64>,
    /// `M (a_0 u^{n−1} − h)`.
    rhs: Vec<f64>,
    /// `Σ_{k<n} a_{n−k} (u^k − u^{k−1})`.
    h: Vec<f64>,
}
