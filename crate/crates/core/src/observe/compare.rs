use std::io::Write;
use std::path::Path;

use super::record::ObservableRow;
use crate::error::{Error, Result};
use crate::models::{run, ModelKind};
use crate::scenarios::RunConfig;

/// First time the piecewise-linear mass curve reaches `threshold`.
pub fn first_crossing(times: &[f64], masses: &[f64], threshold: f64) -> Option<f64> {
    let first = *masses.first()?;
    if first >= threshold {
        return Some(times[0]);
    }
    for k in 1..masses.len() {
        let (m0, m1) = (masses[k - 1], masses[k]);
        if m1 >= threshold {
            let s = (threshold - m0) / (m1 - m0);
            return Some(times[k - 1] + s * (times[k] - times[k - 1]));
        }
    }
    None
}

/// Time at which the mass reaches half the carrying capacity `|Ω|`.
pub fn t_half(rows: &[ObservableRow], area: f64) -> Option<f64> {
    let t: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let m: Vec<f64> = rows.iter().map(|r| r.mass).collect();
    first_crossing(&t, &m, 0.5 * area)
}

/// Both models run on the same discretization and initial state.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub area: f64,
    pub consistent: Vec<ObservableRow>,
    pub caputo: Vec<ObservableRow>,
}

impl Comparison {
    pub fn t_half_consistent(&self) -> Option<f64> {
        t_half(&self.consistent, self.area)
    }

    pub fn t_half_caputo(&self) -> Option<f64> {
        t_half(&self.caputo, self.area)
    }

    pub fn summary(&self) -> String {
        let show = |t: Option<f64>| t.map_or("not reached".to_string(), |t| format!("{t:.6}"));
        format!(
            "t_half consistent: {}\nt_half caputo:     {}\n",
            show(self.t_half_consistent()),
            show(self.t_half_caputo())
        )
    }
}

/// Runs `config` once per model; `config.physics.model` is ignored.
pub fn compare_models(config: &RunConfig) -> Result<Comparison> {
    let mut rows = Vec::with_capacity(2);
    for model in [ModelKind::Consistent, ModelKind::CaputoInTime] {
        let mut c = config.clone();
        c.physics.model = model;
        let traj = run(&c).map_err(|e| {
            log::error!("{model} model run failed: {e}");
            e
        })?;
        rows.push(traj.rows);
    }
    let caputo = rows.pop().unwrap();
    let consistent = rows.pop().unwrap();
    Ok(Comparison {
        area: config.mesh.bounds.area(),
        consistent,
        caputo,
    })
}

/// `t,mass_consistent,mass_caputo` side by side.
pub fn write_comparison(c: &Comparison, path: &Path) -> Result<()> {
    let mut s = String::from("t,mass_consistent,mass_caputo\n");
    for (a, b) in c.consistent.iter().zip(&c.caputo) {
        s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", a.t, a.mass, b.mass));
    }
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(s.as_bytes()).map_err(|e| Error::io(path, e))
}
