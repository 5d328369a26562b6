//! Fixed oracle checks of the time and space building blocks.

use crate::error::Result;
use crate::femspace::{
    assemble_reaction, assemble_reaction_jacobian, build_mesh, integrate, min_eigpair,
    BoundaryCondition, FemMatrices, Field, Rect,
};
use crate::fractime::{
    caputo_l1_apply, check_sonine, conv_weights, gamma, kernel_g, mittag_leffler, TimeGrid,
};
use crate::models::{scalar_solve, ScalarProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> OracleCheck {
    match f() {
        Ok((passed, detail)) => OracleCheck {
            name,
            passed,
            detail,
        },
        Err(e) => OracleCheck {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn within(value: f64, reference: f64, tol: f64) -> (bool, String) {
    let e = rel(value, reference);
    (e <= tol, format!("rel err {e:.2e} (tol {tol:.0e})"))
}

pub fn run_oracle_suite() -> Vec<OracleCheck> {
    let mut out = Vec::new();

    out.push(check("gamma(1/2) = sqrt(pi)", || {
        Ok(within(gamma(0.5), std::f64::consts::PI.sqrt(), 1e-13))
    }));

    out.push(check("weight telescoping, N = 10^4", || {
        let g = TimeGrid::graded(10_000, 2.0, 5.0)?;
        let alpha = 0.3;
        let w = conv_weights(&g, alpha, g.len())?;
        let sum: f64 = w.b.iter().sum();
        Ok(within(sum, kernel_g(2.0 - alpha, 5.0)?, 1e-12))
    }));

    out.push(check("L1 exact on affine data (graded)", || {
        let g = TimeGrid::graded(256, 2.0, 1.0)?;
        let alpha = 0.5;
        let samples: Vec<f64> = g.points().iter().map(|t| 2.0 + 3.0 * t).collect();
        let d = caputo_l1_apply(&g, alpha, &samples)?;
        Ok(within(d, 3.0 * kernel_g(2.0 - alpha, 1.0)?, 1e-12))
    }));

    for (a, b) in [(0.5, 0.5), (0.3, 0.4), (0.25, 0.5)] {
        let name = match (a, b) {
            (0.5, 0.5) => "Sonine g_0.5 * g_0.5 = g_1",
            (0.3, 0.4) => "Sonine g_0.3 * g_0.4 = g_0.7",
            _ => "Sonine g_0.25 * g_0.5 = g_0.75",
        };
        out.push(check(name, || {
            let ok = check_sonine(a, b, 2.0, 1e-10)?;
            Ok((ok, "t = 2, rel tol 1e-10".into()))
        }));
    }

    out.push(check("E_1(-1) = exp(-1)", || {
        Ok(within(mittag_leffler(1.0, -1.0)?, (-1f64).exp(), 1e-13))
    }));
    out.push(check("E_1/2(-1) = erfcx(1)", || {
        Ok(within(
            mittag_leffler(0.5, -1.0)?,
            0.427_583_576_155_807_0,
            1e-12,
        ))
    }));
    out.push(check("E_1/2(-10) = erfcx(10)", || {
        Ok(within(
            mittag_leffler(0.5, -10.0)?,
            0.056_140_992_743_822_586,
            1e-10,
        ))
    }));

    out.push(check("scalar relaxation vs E_1/2", || {
        let alpha = 0.5;
        let g = TimeGrid::graded(512, (2.0 - alpha) / alpha, 1.0)?;
        let y = scalar_solve(&ScalarProblem::relaxation(alpha, -1.0, 1.0), &g)?;
        Ok(within(
            *y.last().unwrap(),
            mittag_leffler(alpha, -1.0)?,
            1e-2,
        ))
    }));

    out.push(check("mass matrix integrates constants", || {
        let mesh = build_mesh(16, 16, Rect::symmetric_unit())?;
        let one = Field::constant(mesh.num_vertices(), 1.0);
        Ok(within(integrate(&mesh, &one)?, 4.0, 1e-13))
    }));

    out.push(check("stiffness annihilates constants", || {
        let mesh = build_mesh(16, 16, Rect::symmetric_unit())?;
        let k = FemMatrices::assemble(&mesh).stiffness;
        let r = k.matvec(&vec![1.0; mesh.num_vertices()])?;
        let m = r.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        Ok((m <= 1e-12, format!("max |K 1| = {m:.2e}")))
    }));

    out.push(check("reaction Jacobian vs finite differences", || {
        let mesh = build_mesh(6, 6, Rect::unit())?;
        let u = mesh.interpolate(|x, y| 0.3 + 0.4 * (3.0 * x + y).sin());
        let j = assemble_reaction_jacobian(&mesh, &u)?;
        let dir: Vec<f64> = (0..u.len())
            .map(|i| ((i * 7 % 5) as f64 - 2.0) / 3.0)
            .collect();
        let h = 1e-6;
        let shift = |s: f64| {
            Field(
                u.values()
                    .iter()
                    .zip(&dir)
                    .map(|(a, d)| a + s * d)
                    .collect(),
            )
        };
        let rp = assemble_reaction(&mesh, &shift(h))?;
        let rm = assemble_reaction(&mesh, &shift(-h))?;
        let jd = j.matvec(&dir)?;
        let err = rp
            .iter()
            .zip(&rm)
            .zip(&jd)
            .map(|((p, m), j)| ((p - m) / (2.0 * h) - j).abs())
            .fold(0.0, f64::max);
        Ok((err <= 1e-8, format!("max err {err:.2e}")))
    }));

    out.push(check("Dirichlet eigenvalue pi^2/2 on (-1,1)^2", || {
        let mesh = build_mesh(64, 64, Rect::symmetric_unit())?;
        let mats = FemMatrices::assemble(&mesh);
        let (lam, _) = min_eigpair(&mesh, &mats, BoundaryCondition::Dirichlet(0.0), 1.0)?;
        Ok(within(lam, std::f64::consts::PI.powi(2) / 2.0, 1e-2))
    }));

    out
}

/// Two-column pass/fail table.
pub fn format_table(checks: &[OracleCheck]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{:<width$}  {}  {}\n",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.detail
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let checks = run_oracle_suite();
        let table = format_table(&checks);
        assert!(checks.iter().all(|c| c.passed), "{table}");
        assert_eq!(table.lines().count(), checks.len());
    }
}
