use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::record::ObservableRow;
use crate::error::{Error, Result};
use crate::femspace::{Field, TriMesh};

pub const TIMESERIES_HEADER: &str = "t,mass,l2,energy,min_u,max_u,newton_iters,cg_iters";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SnapshotFormat {
    /// Legacy ASCII VTK unstructured grid.
    Vtk,
    /// `x,y,u` rows in vertex order.
    CsvGrid,
}

impl SnapshotFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            SnapshotFormat::Vtk => "vtk",
            SnapshotFormat::CsvGrid => "csv_grid",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            SnapshotFormat::Vtk => "vtk",
            SnapshotFormat::CsvGrid => "csv",
        }
    }
}

impl fmt::Display for SnapshotFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SnapshotFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "vtk" => Ok(SnapshotFormat::Vtk),
            "csv_grid" | "csv" => Ok(SnapshotFormat::CsvGrid),
            other => Err(Error::invalid(format!(
                "unknown snapshot format `{other}` (vtk, csv_grid)"
            ))),
        }
    }
}

/// 17 significant digits; parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Appends rows to a timeseries CSV, flushing after each one so that a
/// failed run leaves every completed level on disk.
pub struct TimeseriesWriter {
    path: PathBuf,
    out: BufWriter<File>,
}

impl TimeseriesWriter {
    pub fn create(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = Self {
            out: BufWriter::new(file),
            path,
        };
        w.line(TIMESERIES_HEADER.to_string())?;
        Ok(w)
    }

    fn line(&mut self, s: String) -> Result<()> {
        self.out
            .write_all(s.as_bytes())
            .and_then(|_| self.out.write_all(b"\n"))
            .and_then(|_| self.out.flush())
            .map_err(|e| Error::io(&self.path, e))
    }

    pub fn push(&mut self, r: &ObservableRow) -> Result<()> {
        let s = format!(
            "{},{},{},{},{},{},{},{}",
            num(r.t),
            num(r.mass),
            num(r.l2),
            num(r.energy),
            num(r.min_u),
            num(r.max_u),
            r.newton_iters,
            r.cg_iters
        );
        self.line(s)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

pub fn write_timeseries(rows: &[ObservableRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::invalid("refusing to write an empty timeseries"));
    }
    let mut w = TimeseriesWriter::create(path)?;
    for r in rows {
        w.push(r)?;
    }
    Ok(())
}

pub fn read_timeseries(path: &Path) -> Result<Vec<ObservableRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        msg: format!("line {line}: {msg}"),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TIMESERIES_HEADER => {}
        _ => return Err(bad(1, format!("expected header `{TIMESERIES_HEADER}`"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad(i + 1, format!("expected 8 columns, got {}", f.len())));
        }
        let x = |k: usize| {
            f[k].trim()
                .parse::<f64>()
                .map_err(|_| bad(i + 1, format!("bad number `{}`", f[k])))
        };
        let c = |k: usize| {
            f[k].trim()
                .parse::<usize>()
                .map_err(|_| bad(i + 1, format!("bad count `{}`", f[k])))
        };
        rows.push(ObservableRow {
            t: x(0)?,
            mass: x(1)?,
            l2: x(2)?,
            energy: x(3)?,
            min_u: x(4)?,
            max_u: x(5)?,
            newton_iters: c(6)?,
            cg_iters: c(7)?,
        });
    }
    Ok(rows)
}

/// `u_<t>.<ext>` with `t` printed to six decimals.
pub fn snapshot_file_name(t: f64, format: SnapshotFormat) -> String {
    format!("u_{t:.6}.{}", format.extension())
}

pub fn write_snapshot(
    mesh: &TriMesh,
    u: &Field,
    t: f64,
    path: &Path,
    format: SnapshotFormat,
) -> Result<()> {
    mesh.check_field(u.values())?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res = match format {
        SnapshotFormat::Vtk => write_vtk(&mut w, mesh, u, t),
        SnapshotFormat::CsvGrid => write_csv_grid(&mut w, mesh, u),
    };
    res.and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

fn write_vtk<W: Write>(w: &mut W, mesh: &TriMesh, u: &Field, t: f64) -> std::io::Result<()> {
    let nv = mesh.num_vertices();
    let tris = mesh.triangles();
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "u at t = {}", num(t))?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {nv} double")?;
    for p in mesh.vertices() {
        writeln!(w, "{} {} 0", num(p[0]), num(p[1]))?;
    }
    writeln!(w, "CELLS {} {}", tris.len(), 4 * tris.len())?;
    for t in tris {
        writeln!(w, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    writeln!(w, "CELL_TYPES {}", tris.len())?;
    for _ in tris {
        writeln!(w, "5")?;
    }
    writeln!(w, "POINT_DATA {nv}")?;
    writeln!(w, "SCALARS u double 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for v in u.values() {
        writeln!(w, "{}", num(*v))?;
    }
    Ok(())
}

fn write_csv_grid<W: Write>(w: &mut W, mesh: &TriMesh, u: &Field) -> std::io::Result<()> {
    writeln!(w, "x,y,u")?;
    for (p, v) in mesh.vertices().iter().zip(u.values()) {
        writeln!(w, "{},{},{}", num(p[0]), num(p[1]), num(*v))?;
    }
    Ok(())
}

/// Reads the `u` column of an `x,y,u` grid file.
pub fn read_csv_grid(path: &Path) -> Result<Field> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        msg: format!("line {line}: {msg}"),
    };
    let mut values = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if i == 0 {
            if line != "x,y,u" {
                return Err(bad(1, "expected header `x,y,u`".into()));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let u = line
            .rsplit(',')
            .next()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|_| line.matches(',').count() == 2)
            .ok_or_else(|| bad(i + 1, format!("malformed row `{line}`")))?;
        values.push(u);
    }
    Ok(Field(values))
}
