//! 0-D analogues of both steppers (`M = 1`, `K = 0`), used to verify the
//! temporal discretization against exact fractional ODE solutions.

use super::params::{ModelKind, ReactionMode};
use crate::error::{Error, Result};
use crate::fractime::{check_order, conv_weights, TimeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScalarReaction {
    /// `f(y) = λ y`
    #[default]
    Linear,
    /// `f(y) = λ y (1 − y)`
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarProblem {
    pub alpha: f64,
    pub lambda: f64,
    pub y0: f64,
    pub model: ModelKind,
    pub reaction: ScalarReaction,
    pub mode: ReactionMode,
}

impl ScalarProblem {
    /// Fractional relaxation `C∂^α y = λ y`, solved by `E_α(λ t^α) y0`.
    pub fn relaxation(alpha: f64, lambda: f64, y0: f64) -> Self {
        Self {
            alpha,
            lambda,
            y0,
            model: ModelKind::CaputoInTime,
            reaction: ScalarReaction::Linear,
            mode: ReactionMode::ExplicitHistory,
        }
    }

    fn f(&self, y: f64) -> f64 {
        match self.reaction {
            ScalarReaction::Linear => self.lambda * y,
            ScalarReaction::Logistic => self.lambda * y * (1.0 - y),
        }
    }

    fn df(&self, y: f64) -> f64 {
        match self.reaction {
            ScalarReaction::Linear => self.lambda,
            ScalarReaction::Logistic => self.lambda * (1.0 - 2.0 * y),
        }
    }
}

/// Solves `a0 y − c f(y) = rhs` starting from `guess`.
fn solve_implicit(p: &ScalarProblem, a0: f64, c: f64, rhs: f64, guess: f64) -> Result<f64> {
    if p.reaction == ScalarReaction::Linear {
        return Ok(rhs / (a0 - c * p.lambda));
    }
    let g = |y: f64| a0 * y - c * p.f(y) - rhs;
    let mut y = guess;
    let mut gy = g(y);
    for it in 0..100 {
        if gy.abs() <= 1e-14 * rhs.abs().max(1.0) {
            return Ok(y);
        }
        let dg = a0 - c * p.df(y);
        let step = -gy / dg;
        let mut lambda = 1.0;
        loop {
            let trial = y + lambda * step;
            let gt = g(trial);
            if gt.abs() < gy.abs() {
                y = trial;
                gy = gt;
                break;
            }
            lambda *= 0.5;
            if lambda < 1.0 / 256.0 {
                return Err(Error::DampingFloor {
                    iteration: it + 1,
                    residual: gy.abs(),
                });
            }
        }
    }
    Err(Error::NonConvergence {
        what: "scalar newton",
        iterations: 100,
        residual: gy.abs(),
    })
}

/// Returns `y^0..=y^N` on `grid`.
pub fn scalar_solve(p: &ScalarProblem, grid: &TimeGrid) -> Result<Vec<f64>> {
    check_order(p.alpha)?;
    let n_steps = grid.len();
    let mut y = Vec::with_capacity(n_steps + 1);
    let mut fy = Vec::with_capacity(n_steps + 1);
    y.push(p.y0);
    fy.push(p.f(p.y0));
    for n in 1..=n_steps {
        let w = conv_weights(grid, p.alpha, n)?;
        let a = |k: usize| w.b[k - 1] / grid.dt(k);
        let a0 = a(n);
        let h: f64 = (1..n).map(|k| a(k) * (y[k] - y[k - 1])).sum();
        let base = a0 * y[n - 1] - h;
        let next = match (p.model, p.mode) {
            (ModelKind::CaputoInTime, _) => solve_implicit(p, a0, 1.0, base, y[n - 1])?,
            (ModelKind::Consistent, ReactionMode::ExplicitHistory) => {
                let mem: f64 = w.b.iter().zip(&fy).map(|(b, f)| b * f).sum();
                (base + mem) / a0
            }
            (ModelKind::Consistent, ReactionMode::ImplicitLastInterval) => {
                let mem: f64 = w.b[..n - 1].iter().zip(&fy).map(|(b, f)| b * f).sum();
                solve_implicit(p, a0, w.b[n - 1], base + mem, y[n - 1])?
            }
        };
        y.push(next);
        fy.push(p.f(next));
    }
    Ok(y)
}
