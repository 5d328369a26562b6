use crate::error::{Error, Result};

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub const fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// `(−1, 1)²`.
    pub const fn symmetric_unit() -> Self {
        Self::new(-1.0, 1.0, -1.0, 1.0)
    }

    pub const fn unit() -> Self {
        Self::new(0.0, 1.0, 0.0, 1.0)
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x_min && x <= self.x_max && y >= self.y_min && y <= self.y_max
    }
}

/// Structured triangulation of a rectangle.
///
/// Vertices are numbered row-major (`i + j·(nx+1)`); every cell is split
/// along its bottom-left → top-right diagonal into two counter-clockwise
/// triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    bounds: Rect,
    nx: usize,
    ny: usize,
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<usize>,
    on_boundary: Vec<bool>,
}

impl TriMesh {
    pub fn new(nx: usize, ny: usize, bounds: Rect) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::invalid("mesh needs at least one cell per axis"));
        }
        let finite = [bounds.x_min, bounds.x_max, bounds.y_min, bounds.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(bounds.x_max > bounds.x_min) || !(bounds.y_max > bounds.y_min) {
            return Err(Error::invalid(format!("degenerate mesh bounds {bounds:?}")));
        }
        let hx = (bounds.x_max - bounds.x_min) / nx as f64;
        let hy = (bounds.y_max - bounds.y_min) / ny as f64;
        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        for j in 0..=ny {
            let y = if j == ny {
                bounds.y_max
            } else {
                bounds.y_min + j as f64 * hy
            };
            for i in 0..=nx {
                let x = if i == nx {
                    bounds.x_max
                } else {
                    bounds.x_min + i as f64 * hx
                };
                vertices.push([x, y]);
            }
        }
        let idx = |i: usize, j: usize| i + j * (nx + 1);
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let (v00, v10, v01, v11) =
                    (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
                triangles.push([v00, v10, v11]);
                triangles.push([v00, v11, v01]);
            }
        }
        let mut on_boundary = vec![false; vertices.len()];
        for j in 0..=ny {
            for i in 0..=nx {
                if i == 0 || j == 0 || i == nx || j == ny {
                    on_boundary[idx(i, j)] = true;
                }
            }
        }
        let boundary = (0..vertices.len()).filter(|&v| on_boundary[v]).collect();
        Ok(Self {
            bounds,
            nx,
            ny,
            vertices,
            triangles,
            boundary,
            on_boundary,
        })
    }

    pub fn bounds(&self) -> Rect {
        self.bounds
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Cell width in x (the leg length of each right triangle).
    pub fn h(&self) -> f64 {
        (self.bounds.x_max - self.bounds.x_min) / self.nx as f64
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Sorted indices of boundary vertices.
    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.on_boundary[v]
    }

    /// Signed area of triangle `t` (positive for counter-clockwise).
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        0.5 * ((pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1]))
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate<F: Fn(f64, f64) -> f64>(&self, f: F) -> Field {
        Field(self.vertices.iter().map(|p| f(p[0], p[1])).collect())
    }

    pub(crate) fn check_field(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vertices(),
                got: u.len(),
            });
        }
        Ok(())
    }
}

/// Convenience wrapper around [`TriMesh::new`].
pub fn build_mesh(nx: usize, ny: usize, bounds: Rect) -> Result<TriMesh> {
    TriMesh::new(nx, ny, bounds)
}

/// Nodal coefficients of a P1 function.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Field(pub Vec<f64>);

impl Field {
    pub fn constant(n: usize, value: f64) -> Self {
        Field(vec![value; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Max-norm distance to another field of the same length.
    pub fn max_diff(&self, other: &Field) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl From<Vec<f64>> for Field {
    fn from(v: Vec<f64>) -> Self {
        Field(v)
    }
}

impl AsRef<[f64]> for Field {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}
