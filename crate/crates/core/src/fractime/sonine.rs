//! Numerical check of the Sonine identity `g_α * g_β = g_{α+β}`.

use super::gamma::gamma;
use super::quad::integrate;
use super::weights::kernel_g;
use crate::error::{Error, Result};

/// `(g_α * g_β)(t) = ∫_0^t g_α(t − s) g_β(s) ds` by adaptive quadrature.
///
/// The integral is split at `t/2`; on each half the endpoint singularity is
/// absorbed by `s = u^{1/β}` (left) and `t − s = v^{1/α}` (right), which turn
/// `s^{β−1} ds` into `du / β` and leave smooth integrands.
pub fn kernel_convolution(alpha: f64, beta: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::invalid("kernel orders must be positive"));
    }
    if !(t > 0.0) {
        return Err(Error::invalid(format!("need t > 0, got {t}")));
    }
    let half = 0.5 * t;
    let left = |u: f64| (t - u.powf(1.0 / beta)).powf(alpha - 1.0);
    let right = |v: f64| (t - v.powf(1.0 / alpha)).powf(beta - 1.0);
    let (l, _) = integrate(left, 0.0, half.powf(beta), 0.0, 1e-13, 2000)?;
    let (r, _) = integrate(right, 0.0, half.powf(alpha), 0.0, 1e-13, 2000)?;
    Ok((l / beta + r / alpha) / (gamma(alpha) * gamma(beta)))
}

/// Compares the numerical convolution at `t` against an arbitrary target.
pub fn check_sonine_against(alpha: f64, beta: f64, t: f64, target: f64, tol: f64) -> Result<bool> {
    let value = kernel_convolution(alpha, beta, t)?;
    Ok((value - target).abs() <= tol * target.abs())
}

/// `Ok(true)` if `(g_α * g_β)(t)` matches `g_{α+β}(t)` to relative `tol`.
///
/// A quadrature failure is an `Err`, distinct from `Ok(false)`.
pub fn check_sonine(alpha: f64, beta: f64, t: f64, tol: f64) -> Result<bool> {
    let target = kernel_g(alpha + beta, t)?;
    check_sonine_against(alpha, beta, t, target, tol)
}
