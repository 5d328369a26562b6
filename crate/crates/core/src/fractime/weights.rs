//! Piecewise-constant kernel quadrature and the graded L1 scheme.
//!
//! For `1 <= n <= N` the weights are
//! `b_j^(n) = [(t_n − t_j)^{1−α} − (t_n − t_{j+1})^{1−α}] / Γ(2−α)`, the exact
//! integrals of `g_{1−α}(t_n − s)` over `[t_j, t_{j+1}]`. The L1 coefficients
//! are the rescaled weights `a_{n−k}^(n) = b_{k−1}^(n) / Δt_k`.

use super::gamma::gamma;
use super::grid::TimeGrid;
use super::neumaier_sum;
use crate::error::{Error, Result};

/// Singular kernel `g_α(t) = t^{α−1} / Γ(α)`.
pub fn kernel_g(alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!(
            "kernel order must be positive, got {alpha}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::invalid(format!(
            "kernel is singular at t = {t}; need t > 0"
        )));
    }
    if alpha == 1.0 {
        return Ok(1.0);
    }
    Ok(t.powf(alpha - 1.0) / gamma(alpha))
}

pub(crate) fn check_order(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "fractional order must lie in (0, 1], got {alpha}"
        )))
    }
}

/// Quadrature weights `b_0^(n)..b_{n−1}^(n)` at one step.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvWeights {
    pub n: usize,
    pub alpha: f64,
    pub b: Vec<f64>,
}

/// L1 coefficients at one step, indexed by lag: `a[m] = a_m^(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Coeffs {
    pub n: usize,
    pub alpha: f64,
    pub a: Vec<f64>,
}

impl L1Coeffs {
    /// Coefficient multiplying `u^k − u^{k−1}`.
    pub fn for_increment(&self, k: usize) -> f64 {
        self.a[self.n - k]
    }
}

fn fill_weights(grid: &TimeGrid, alpha: f64, n: usize, out: &mut Vec<f64>) {
    out.clear();
    let p = 1.0 - alpha;
    let scale = 1.0 / gamma(2.0 - alpha);
    let t_n = grid.t(n);
    for j in 0..n {
        let near = t_n - grid.t(j);
        let w = if j + 1 == n {
            near.powf(p)
        } else {
            // near^p − far^p = −near^p · expm1(p · ln(1 − Δ/near)); no
            // subtraction of nearly equal powers.
            let ratio = grid.dt(j + 1) / near;
            -near.powf(p) * (p * (-ratio).ln_1p()).exp_m1()
        };
        out.push(w * scale);
    }
}

/// Weights `b_j^(n)`, `j = 0..n`, for the kernel `g_{1−α}`.
pub fn conv_weights(grid: &TimeGrid, alpha: f64, n: usize) -> Result<ConvWeights> {
    check_order(alpha)?;
    grid.check_step(n)?;
    let mut b = Vec::with_capacity(n);
    fill_weights(grid, alpha, n, &mut b);
    Ok(ConvWeights { n, alpha, b })
}

/// L1 coefficients `a_{n−k}^(n) = b_{k−1}^(n) / Δt_k`.
pub fn l1_coeffs(grid: &TimeGrid, alpha: f64, n: usize) -> Result<L1Coeffs> {
    let w = conv_weights(grid, alpha, n)?;
    Ok(l1_from_weights(grid, &w))
}

pub fn l1_from_weights(grid: &TimeGrid, w: &ConvWeights) -> L1Coeffs {
    let n = w.n;
    let a = (0..n)
        .map(|m| {
            let k = n - m;
            w.b[k - 1] / grid.dt(k)
        })
        .collect();
    L1Coeffs {
        n,
        alpha: w.alpha,
        a,
    }
}

/// L1 approximation of the Caputo derivative at `t_n` from `u(t_0)..=u(t_n)`.
pub fn caputo_l1_apply(grid: &TimeGrid, alpha: f64, samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 || samples.len() > grid.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: grid.len() + 1,
            got: samples.len(),
        });
    }
    let n = samples.len() - 1;
    let w = conv_weights(grid, alpha, n)?;
    let terms = (1..=n).map(|k| w.b[k - 1] / grid.dt(k) * (samples[k] - samples[k - 1]));
    Ok(neumaier_sum(terms))
}

/// `(g_{1−α} * f)(t_n) ≈ Σ_j b_j^(n) f^j` with `f^j` the value on `[t_j, t_{j+1})`.
pub fn discrete_convolution(
    grid: &TimeGrid,
    alpha: f64,
    f_samples: &[f64],
    n: usize,
) -> Result<f64> {
    if f_samples.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f_samples.len(),
        });
    }
    let w = conv_weights(grid, alpha, n)?;
    Ok(neumaier_sum(w.b.iter().zip(f_samples).map(|(b, f)| b * f)))
}

/// Lower-triangular table of all weight rows for one `(grid, α)` pair.
///
/// Immutable once built, so it can be shared between threads freely.
#[derive(Debug, Clone)]
pub struct WeightTable {
    alpha: f64,
    offsets: Vec<usize>,
    values: Vec<f64>,
}

impl WeightTable {
    pub fn new(grid: &TimeGrid, alpha: f64) -> Result<Self> {
        check_order(alpha)?;
        let n_max = grid.len();
        let mut offsets = Vec::with_capacity(n_max + 1);
        let mut values = Vec::with_capacity(n_max * (n_max + 1) / 2);
        let mut row = Vec::with_capacity(n_max);
        offsets.push(0);
        for n in 1..=n_max {
            fill_weights(grid, alpha, n, &mut row);
            values.extend_from_slice(&row);
            offsets.push(values.len());
        }
        Ok(Self {
            alpha,
            offsets,
            values,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `b_0^(n)..b_{n−1}^(n)`.
    pub fn row(&self, n: usize) -> &[f64] {
        &self.values[self.offsets[n - 1]..self.offsets[n]]
    }
}
