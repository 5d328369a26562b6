//! Damped Newton iteration with Krylov inner solves.

use super::csr::SparseCsr;
use super::krylov::{cg_solve, minres_solve, LinearOptions, Preconditioner, SolveReport};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Absolute tolerance on `‖F(x)‖₂`.
    pub tol: f64,
    pub max_iter: usize,
    /// Smallest step fraction tried by the backtracking line search.
    pub min_damping: f64,
    pub linear: LinearOptions,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            min_damping: 1.0 / 256.0,
            linear: LinearOptions {
                tol: 1e-12,
                ..LinearOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
    pub linear_iterations: usize,
    /// Times an inner solve had to fall back from CG to MINRES.
    pub minres_fallbacks: usize,
    /// `‖F‖` at the initial guess and after every accepted step.
    pub residual_history: Vec<f64>,
}

impl NewtonReport {
    pub fn as_solve_report(&self) -> SolveReport {
        SolveReport {
            iterations: self.iterations,
            residual: self.residual,
            converged: self.converged,
            negative_curvature: false,
            history: self.residual_history.clone(),
        }
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Solves a symmetric linear system, trying Jacobi-CG first and falling back
/// to MINRES when CG detects indefiniteness or stalls.
pub fn solve_symmetric(
    a: &SparseCsr,
    b: &[f64],
    opts: &LinearOptions,
) -> Result<(Vec<f64>, SolveReport, bool)> {
    let definite_diag = a.diag().iter().all(|&d| d > 0.0);
    if definite_diag {
        let (x, rep) = cg_solve(a, b, None, opts)?;
        if rep.converged {
            return Ok((x, rep, false));
        }
        let cg_iters = rep.iterations;
        let (x, mut rep) = minres_solve(a, b, None, opts)?;
        rep.iterations += cg_iters;
        return Ok((x, rep, true));
    }
    let opts = LinearOptions {
        preconditioner: Preconditioner::Jacobi,
        ..*opts
    };
    let (x, rep) = minres_solve(a, b, None, &opts)?;
    Ok((x, rep, true))
}

/// Newton's method for `F(x) = 0` with backtracking.
///
/// The step is halved until `‖F‖` decreases; if that needs a fraction below
/// `min_damping` the iteration stops with [`Error::DampingFloor`].
pub fn newton_solve<R, J>(
    mut residual: R,
    mut jacobian: J,
    x0: &[f64],
    opts: &NewtonOptions,
) -> Result<(Vec<f64>, NewtonReport)>
where
    R: FnMut(&[f64]) -> Vec<f64>,
    J: FnMut(&[f64]) -> SparseCsr,
{
    let mut x = x0.to_vec();
    let mut f = residual(&x);
    if f.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: f.len(),
        });
    }
    let mut f_norm = norm(&f);
    let mut report = NewtonReport {
        residual_history: vec![f_norm],
        ..Default::default()
    };
    while f_norm > opts.tol {
        if report.iterations >= opts.max_iter {
            report.residual = f_norm;
            return Err(Error::NonConvergence {
                what: "newton",
                iterations: report.iterations,
                residual: f_norm,
            });
        }
        report.iterations += 1;
        let jac = jacobian(&x);
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let (step, lin, fell_back) =
            solve_symmetric(&jac, &rhs, &opts.linear).map_err(|e| Error::InnerSolve {
                iteration: report.iterations,
                source: Box::new(e),
            })?;
        report.linear_iterations += lin.iterations;
        report.minres_fallbacks += usize::from(fell_back);
        if !lin.converged {
            // An inexact direction is still usable while it reduces ‖F‖; only
            // a useless one is fatal.
            let rel = lin.residual / norm(&rhs).max(f64::MIN_POSITIVE);
            if !(rel < 0.5) {
                return Err(Error::InnerSolve {
                    iteration: report.iterations,
                    source: Box::new(Error::NonConvergence {
                        what: "linear solver",
                        iterations: lin.iterations,
                        residual: lin.residual,
                    }),
                });
            }
        }

        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = x
                .iter()
                .zip(&step)
                .map(|(xi, si)| xi + lambda * si)
                .collect();
            let f_trial = residual(&trial);
            let trial_norm = norm(&f_trial);
            if trial_norm < f_norm {
                x = trial;
                f = f_trial;
                f_norm = trial_norm;
                break;
            }
            lambda *= 0.5;
            if lambda < opts.min_damping {
                report.residual = f_norm;
                return Err(Error::DampingFloor {
                    iteration: report.iterations,
                    residual: f_norm,
                });
            }
        }
        report.residual_history.push(f_norm);
    }
    report.residual = f_norm;
    report.converged = true;
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_residual_takes_one_step() {
        let a =
            SparseCsr::from_triplets(2, 2, &[(0, 0, 4.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 3.0)])
                .unwrap();
        let b = [1.0, 2.0];
        let (x, rep) = newton_solve(
            |x| {
                let ax = a.matvec(x).unwrap();
                ax.iter().zip(&b).map(|(p, q)| p - q).collect()
            },
            |_| a.clone(),
            &[0.0, 0.0],
            &NewtonOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.iterations, 1);
        assert!((x[0] - 1.0 / 11.0).abs() < 1e-12 && (x[1] - 7.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_square_root() {
        let (x, rep) = newton_solve(
            |x| vec![x[0] * x[0] - 4.0],
            |x| SparseCsr::diagonal(&[2.0 * x[0]]),
            &[3.0],
            &NewtonOptions::default(),
        )
        .unwrap();
        assert!((x[0] - 2.0).abs() < 1e-10);
        assert!(rep.iterations <= 6, "{}", rep.iterations);
        // quadratic convergence: e_{k+1} ≲ C e_k²
        let h = &rep.residual_history;
        for w in h.windows(2).filter(|w| w[0] < 1e-1 && w[1] > 0.0) {
            assert!(w[1] <= 2.0 * w[0] * w[0], "{h:?}");
        }
    }

    #[test]
    fn already_converged() {
        let (x, rep) = newton_solve(
            |x| vec![x[0] - 1.0],
            |_| SparseCsr::identity(1),
            &[1.0],
            &NewtonOptions::default(),
        )
        .unwrap();
        assert_eq!(x, vec![1.0]);
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn damping_floor_is_reported() {
        // A Jacobian with the wrong sign makes every step uphill.
        let r = newton_solve(
            |x| vec![x[0] - 1.0],
            |_| SparseCsr::diagonal(&[-1.0]),
            &[0.0],
            &NewtonOptions::default(),
        );
        assert!(
            matches!(r, Err(Error::DampingFloor { iteration: 1, .. })),
            "{r:?}"
        );
    }

    #[test]
    fn iteration_cap_is_reported() {
        let opts = NewtonOptions {
            max_iter: 2,
            ..Default::default()
        };
        let r = newton_solve(
            |x| vec![x[0].atan()],
            |x| SparseCsr::diagonal(&[1.0 / (1.0 + x[0] * x[0])]),
            &[1.0],
            &opts,
        );
        assert!(
            matches!(r, Err(Error::NonConvergence { what: "newton", .. })),
            "{r:?}"
        );
    }

    #[test]
    fn inner_failure_is_reported() {
        let opts = NewtonOptions {
            linear: LinearOptions {
                max_iter: 0,
                ..Default::default()
            },
            ..Default::default()
        };
        let r = newton_solve(
            |x| vec![x[0] - 1.0, x[1]],
            |_| SparseCsr::identity(2),
            &[0.0, 1.0],
            &opts,
        );
        assert!(matches!(r, Err(Error::InnerSolve { .. })), "{r:?}");
    }
}
