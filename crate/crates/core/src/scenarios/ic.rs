//! Smoothed-indicator initial conditions `u₀ = ½ (1 − tanh(s/ε))`.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::femspace::{Field, Rect, TriMesh};

/// Level-set value used outside the blob's restriction window.
pub const BLOB_OUTSIDE: f64 = 1e3;

/// Default geometry of the circle scenarios.
pub const CIRCLE_CENTER: [f64; 2] = [0.0, 0.0];
pub const CIRCLE_RADIUS: f64 = 0.2;
pub const FOUR_CIRCLE_CENTERS: [[f64; 2]; 4] = [[-0.5, -0.5], [0.5, -0.5], [-0.5, 0.5], [0.5, 0.5]];
pub const FOUR_CIRCLE_RADIUS: f64 = 0.15;

/// `½ (1 − tanh(s/ε))`, evaluated as `1 / (1 + e^{2s/ε})` so that tails stay
/// strictly positive instead of rounding to zero.
pub fn smoothed_indicator(s: f64, epsilon: f64) -> f64 {
    1.0 / (1.0 + (2.0 * s / epsilon).exp())
}

/// Nodal values of the smoothed indicator of `{s < 0}`.
pub fn ic_smoothed<S: Fn(f64, f64) -> f64>(mesh: &TriMesh, s: S, epsilon: f64) -> Result<Field> {
    if !(epsilon > 0.0) {
        return Err(Error::invalid(format!(
            "interface width must be positive, got {epsilon}"
        )));
    }
    Ok(mesh.interpolate(|x, y| smoothed_indicator(s(x, y), epsilon)))
}

/// Signed distance to a circle (negative inside).
pub fn levelset_circle(center: [f64; 2], radius: f64) -> Result<impl Fn(f64, f64) -> f64> {
    if !(radius > 0.0) {
        return Err(Error::invalid(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    Ok(move |x: f64, y: f64| (x - center[0]).hypot(y - center[1]) - radius)
}

/// Pointwise minimum of the circle level sets.
pub fn levelset_four_circles(
    centers: &[[f64; 2]],
    radius: f64,
) -> Result<impl Fn(f64, f64) -> f64> {
    if centers.is_empty() {
        return Err(Error::invalid("need at least one circle center"));
    }
    if !(radius > 0.0) {
        return Err(Error::invalid(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    let centers = centers.to_vec();
    Ok(move |x: f64, y: f64| {
        centers
            .iter()
            .map(|c| (x - c[0]).hypot(y - c[1]) - radius)
            .fold(f64::INFINITY, f64::min)
    })
}

/// The irregular "blob" level set, restricted to `0.05 < x < 0.9`,
/// `0.1 < y < 0.85` and clamped to [`BLOB_OUTSIDE`] elsewhere.
pub fn levelset_blob() -> impl Fn(f64, f64) -> f64 {
    |x: f64, y: f64| {
        if !(x > 0.05 && x < 0.9 && y > 0.1 && y < 0.85) {
            return BLOB_OUTSIDE;
        }
        let (dx, dy) = (x - 0.6, y - 0.5);
        ((6.0 * dx + 2.0 * dy).sin() + 1.0) * (7.0 * dx - 0.2).powi(2)
            + ((-8.0 * dx + 10.0 * dy).sin() + 1.1) * (9.0 * dy + 0.1).powi(2)
            - 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    FourCircles {
        centers: Vec<[f64; 2]>,
        radius: f64,
    },
    Blob,
    /// Nodal values from a `x,y,u` grid file written by the snapshot writer.
    FromFile {
        path: PathBuf,
    },
    /// Spatially constant state.
    Constant {
        value: f64,
    },
}

impl Default for InitialCondition {
    fn default() -> Self {
        InitialCondition::Circle {
            center: CIRCLE_CENTER,
            radius: CIRCLE_RADIUS,
        }
    }
}

impl InitialCondition {
    pub fn kind(&self) -> &'static str {
        match self {
            InitialCondition::Circle { .. } => "circle",
            InitialCondition::FourCircles { .. } => "four_circles",
            InitialCondition::Blob => "blob",
            InitialCondition::FromFile { .. } => "file",
            InitialCondition::Constant { .. } => "constant",
        }
    }

    /// Default-parameter IC for a kind name.
    pub fn from_kind(kind: &str) -> Result<Self> {
        Ok(match kind.trim().to_ascii_lowercase().as_str() {
            "circle" => Self::default(),
            "four_circles" | "fourcircles" | "four-circles" => InitialCondition::FourCircles {
                centers: FOUR_CIRCLE_CENTERS.to_vec(),
                radius: FOUR_CIRCLE_RADIUS,
            },
            "blob" => InitialCondition::Blob,
            "file" => InitialCondition::FromFile {
                path: PathBuf::new(),
            },
            "constant" => InitialCondition::Constant { value: 0.0 },
            other => {
                return Err(Error::invalid(format!(
                "unknown initial condition `{other}` (circle, four_circles, blob, file, constant)"
            )))
            }
        })
    }

    /// Rejects circles that do not fit inside the domain.
    pub fn validate(&self, domain: Rect) -> Result<()> {
        let fits = |c: [f64; 2], r: f64| {
            c[0] - r >= domain.x_min
                && c[0] + r <= domain.x_max
                && c[1] - r >= domain.y_min
                && c[1] + r <= domain.y_max
        };
        match self {
            InitialCondition::Circle { center, radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::invalid("circle radius must be positive"));
                }
                if !fits(*center, *radius) {
                    log::warn!("circle {center:?} r={radius} leaves the domain");
                    return Err(Error::invalid(format!(
                        "circle {center:?} with radius {radius} is not inside the domain"
                    )));
                }
            }
            InitialCondition::FourCircles { centers, radius } => {
                if centers.is_empty() || !(*radius > 0.0) {
                    return Err(Error::invalid(
                        "circle list needs centers and a positive radius",
                    ));
                }
                if let Some(c) = centers.iter().find(|c| !fits(**c, *radius)) {
                    log::warn!("circle {c:?} r={radius} leaves the domain");
                    return Err(Error::invalid(format!(
                        "circle {c:?} with radius {radius} is not inside the domain"
                    )));
                }
            }
            InitialCondition::FromFile { path } if path.as_os_str().is_empty() => {
                return Err(Error::invalid("file initial condition needs a path"));
            }
            InitialCondition::Constant { value } if !value.is_finite() => {
                return Err(Error::invalid("constant initial value must be finite"));
            }
            _ => {}
        }
        Ok(())
    }

    /// Nodal `u^0` on `mesh` with interface width `epsilon`.
    pub fn build(&self, mesh: &TriMesh, epsilon: f64) -> Result<Field> {
        match self {
            InitialCondition::Circle { center, radius } => {
                ic_smoothed(mesh, levelset_circle(*center, *radius)?, epsilon)
            }
            InitialCondition::FourCircles { centers, radius } => {
                ic_smoothed(mesh, levelset_four_circles(centers, *radius)?, epsilon)
            }
            InitialCondition::Blob => ic_smoothed(mesh, levelset_blob(), epsilon),
            InitialCondition::FromFile { path } => {
                let u = crate::observe::read_csv_grid(path)?;
                if u.len() != mesh.num_vertices() {
                    return Err(Error::Parse {
                        path: path.clone(),
                        msg: format!(
                            "{} values for a mesh with {} vertices",
                            u.len(),
                            mesh.num_vertices()
                        ),
                    });
                }
                Ok(u)
            }
            InitialCondition::Constant { value } => {
                Ok(Field::constant(mesh.num_vertices(), *value))
            }
        }
    }
}
