//! `key = value` run configuration with `[mesh]`, `[time]`, `[physics]`,
//! `[ic]` and `[output]` sections.
//!
//! ```text
//! [mesh]
//! nx = 32
//! ny = 32
//!
//! [physics]
//! alpha = 0.5
//! model = caputo      # or consistent
//!
//! [ic]
//! kind = four_circles
//! ```
//!
//! Unset keys take the defaults of [`RunConfig::default`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::ic::{
    InitialCondition, CIRCLE_CENTER, CIRCLE_RADIUS, FOUR_CIRCLE_CENTERS, FOUR_CIRCLE_RADIUS,
};
use crate::error::{Error, Result};
use crate::femspace::{BoundaryCondition, Field, Rect, TriMesh};
use crate::fractime::TimeGrid;
use crate::models::{ModelKind, ModelParams, ReactionMode};
use crate::observe::SnapshotFormat;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshSpec {
    pub nx: usize,
    pub ny: usize,
    pub bounds: Rect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSpec {
    /// Number of steps `N`.
    pub n: usize,
    pub gamma: f64,
    /// Final time `T`.
    pub t_final: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub directory: PathBuf,
    /// Run directory name; derived from the model, α and IC when unset.
    pub name: Option<String>,
    /// `None` means `{0, T/4, T/2, T}`.
    pub snapshot_times: Option<Vec<f64>>,
    pub formats: Vec<SnapshotFormat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mesh: MeshSpec,
    pub time: TimeSpec,
    pub physics: ModelParams,
    pub ic: InitialCondition,
    /// Interface width `ε` in multiples of `h`.
    pub epsilon_factor: f64,
    pub output: OutputSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mesh: MeshSpec {
                nx: 256,
                ny: 256,
                bounds: Rect::symmetric_unit(),
            },
            time: TimeSpec {
                n: 256,
                gamma: 2.0,
                t_final: 5.0,
            },
            physics: ModelParams::default(),
            ic: InitialCondition::default(),
            epsilon_factor: 10.0,
            output: OutputSpec {
                directory: PathBuf::from("output"),
                name: None,
                snapshot_times: None,
                formats: vec![SnapshotFormat::Vtk],
            },
        }
    }
}

impl RunConfig {
    pub fn mesh(&self) -> Result<TriMesh> {
        TriMesh::new(self.mesh.nx, self.mesh.ny, self.mesh.bounds)
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::graded(self.time.n, self.time.gamma, self.time.t_final)
    }

    /// `ε = epsilon_factor · h` on `mesh`.
    pub fn epsilon(&self, mesh: &TriMesh) -> f64 {
        self.epsilon_factor * mesh.h()
    }

    pub fn initial_field(&self, mesh: &TriMesh) -> Result<Field> {
        self.ic.build(mesh, self.epsilon(mesh))
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        match &self.output.snapshot_times {
            Some(t) => t.clone(),
            None => {
                let t = self.time.t_final;
                vec![0.0, 0.25 * t, 0.5 * t, t]
            }
        }
    }

    pub fn run_name(&self) -> String {
        match &self.output.name {
            Some(n) => n.clone(),
            None => format!(
                "{}_alpha{}_{}",
                self.physics.model,
                self.physics.alpha,
                self.ic.kind()
            ),
        }
    }

    pub fn run_dir(&self) -> PathBuf {
        self.output.directory.join(self.run_name())
    }

    /// Range checks on every field.
    pub fn validate(&self) -> Result<()> {
        let field = |f: &str, msg: String| Error::ConfigField {
            field: f.to_string(),
            msg,
        };
        let m = &self.mesh;
        if m.nx == 0 {
            return Err(field("mesh.nx", "must be at least 1".into()));
        }
        if m.ny == 0 {
            return Err(field("mesh.ny", "must be at least 1".into()));
        }
        let b = m.bounds;
        if !(b.x_min < b.x_max) || !b.x_min.is_finite() || !b.x_max.is_finite() {
            return Err(field(
                "mesh.x_max",
                format!("need x_min < x_max, got {} and {}", b.x_min, b.x_max),
            ));
        }
        if !(b.y_min < b.y_max) || !b.y_min.is_finite() || !b.y_max.is_finite() {
            return Err(field(
                "mesh.y_max",
                format!("need y_min < y_max, got {} and {}", b.y_min, b.y_max),
            ));
        }
        let t = &self.time;
        if t.n == 0 {
            return Err(field("time.N", "must be at least 1".into()));
        }
        if !(t.gamma >= 1.0) || !t.gamma.is_finite() {
            return Err(field(
                "time.gamma",
                format!("grading must be >= 1, got {}", t.gamma),
            ));
        }
        if !(t.t_final > 0.0) || !t.t_final.is_finite() {
            return Err(field(
                "time.T",
                format!("must be positive, got {}", t.t_final),
            ));
        }
        let p = &self.physics;
        if !(p.diffusion >= 0.0) || !p.diffusion.is_finite() {
            return Err(field(
                "physics.D",
                format!("must be >= 0, got {}", p.diffusion),
            ));
        }
        if !(p.rate >= 0.0) || !p.rate.is_finite() {
            return Err(field("physics.r", format!("must be >= 0, got {}", p.rate)));
        }
        if !(p.alpha > 0.0 && p.alpha <= 1.0) {
            return Err(field(
                "physics.alpha",
                format!("must lie in (0, 1], got {}", p.alpha),
            ));
        }
        if let BoundaryCondition::Dirichlet(v) = p.bc {
            if !v.is_finite() {
                return Err(field("physics.bc_value", "must be finite".into()));
            }
        }
        if !(self.epsilon_factor > 0.0) || !self.epsilon_factor.is_finite() {
            return Err(field(
                "ic.epsilon_factor",
                format!("must be positive, got {}", self.epsilon_factor),
            ));
        }
        self.ic
            .validate(b)
            .map_err(|e| field("ic", strip_invalid(e)))?;
        for &s in self.snapshot_times().iter() {
            if !(0.0..=t.t_final).contains(&s) {
                return Err(field(
                    "output.snapshot_times",
                    format!("{s} lies outside [0, {}]", t.t_final),
                ));
            }
        }
        if let Some(name) = &self.output.name {
            if name.is_empty() || name.contains(['/', '\\']) {
                return Err(field(
                    "output.name",
                    format!("`{name}` is not a plain directory name"),
                ));
            }
        }
        Ok(())
    }

    /// Serializes every field; [`load_config`] reads the result back unchanged.
    pub fn to_document(&self) -> String {
        let mut s = String::new();
        let m = &self.mesh;
        let _ = writeln!(s, "[mesh]");
        let _ = writeln!(s, "nx = {}\nny = {}", m.nx, m.ny);
        let b = m.bounds;
        let _ = writeln!(
            s,
            "x_min = {:?}\nx_max = {:?}\ny_min = {:?}\ny_max = {:?}",
            b.x_min, b.x_max, b.y_min, b.y_max
        );
        let t = &self.time;
        let _ = writeln!(
            s,
            "\n[time]\nN = {}\ngamma = {:?}\nT = {:?}",
            t.n, t.gamma, t.t_final
        );
        let p = &self.physics;
        let _ = writeln!(
            s,
            "\n[physics]\nD = {:?}\nr = {:?}\nalpha = {:?}",
            p.diffusion, p.rate, p.alpha
        );
        let _ = writeln!(s, "model = {}", p.model);
        match p.bc {
            BoundaryCondition::Neumann => {
                let _ = writeln!(s, "bc = neumann");
            }
            BoundaryCondition::Dirichlet(v) => {
                let _ = writeln!(s, "bc = dirichlet\nbc_value = {v:?}");
            }
        }
        let _ = writeln!(s, "reaction_mode = {}", p.reaction_mode);
        let _ = writeln!(s, "\n[ic]\nkind = {}", self.ic.kind());
        match &self.ic {
            InitialCondition::Circle { center, radius } => {
                let _ = writeln!(
                    s,
                    "center = {:?}, {:?}\nradius = {radius:?}",
                    center[0], center[1]
                );
            }
            InitialCondition::FourCircles { centers, radius } => {
                let _ = writeln!(
                    s,
                    "centers = {}\nradius = {radius:?}",
                    format_points(centers)
                );
            }
            InitialCondition::Blob => {}
            InitialCondition::FromFile { path } => {
                let _ = writeln!(s, "path = {}", path.display());
            }
            InitialCondition::Constant { value } => {
                let _ = writeln!(s, "value = {value:?}");
            }
        }
        let _ = writeln!(s, "epsilon_factor = {:?}", self.epsilon_factor);
        let o = &self.output;
        let _ = writeln!(s, "\n[output]\ndirectory = {}", o.directory.display());
        if let Some(name) = &o.name {
            let _ = writeln!(s, "name = {name}");
        }
        if let Some(times) = &o.snapshot_times {
            let list: Vec<String> = times.iter().map(|t| format!("{t:?}")).collect();
            let _ = writeln!(s, "snapshot_times = {}", list.join(", "));
        }
        let formats: Vec<&str> = o.formats.iter().map(|f| f.as_str()).collect();
        let _ = writeln!(
            s,
            "formats = {}",
            if formats.is_empty() {
                "none".to_string()
            } else {
                formats.join(", ")
            }
        );
        s
    }
}

fn strip_invalid(e: Error) -> String {
    match e {
        Error::InvalidArgument(m) => m,
        other => other.to_string(),
    }
}

fn format_points(points: &[[f64; 2]]) -> String {
    let parts: Vec<String> = points
        .iter()
        .map(|p| format!("{:?}, {:?}", p[0], p[1]))
        .collect();
    parts.join("; ")
}

const KEYS: &[(&str, &[&str])] = &[
    ("mesh", &["nx", "ny", "x_min", "x_max", "y_min", "y_max"]),
    ("time", &["N", "gamma", "T"]),
    (
        "physics",
        &[
            "D",
            "r",
            "alpha",
            "model",
            "bc",
            "bc_value",
            "reaction_mode",
        ],
    ),
    (
        "ic",
        &[
            "kind",
            "center",
            "centers",
            "radius",
            "path",
            "value",
            "epsilon_factor",
        ],
    ),
    (
        "output",
        &["directory", "name", "snapshot_times", "formats"],
    ),
];

/// Raw `section.key -> (line, value)` entries; line 0 marks an override.
#[derive(Debug, Default)]
struct Entries(BTreeMap<String, (usize, String)>);

fn canonical_key(section: &str, key: &str) -> Option<String> {
    let keys = KEYS.iter().find(|(s, _)| *s == section)?.1;
    keys.iter()
        .find(|k| **k == key || k.eq_ignore_ascii_case(key))
        .map(|k| format!("{section}.{k}"))
}

fn parse_entries(text: &str) -> Result<Entries> {
    let mut entries = Entries::default();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::ConfigLine {
                    line,
                    msg: format!("malformed section header `{content}`"),
                })?
                .trim()
                .to_ascii_lowercase();
            if !KEYS.iter().any(|(s, _)| *s == name) {
                return Err(Error::ConfigLine {
                    line,
                    msg: format!("unknown section [{name}] (mesh, time, physics, ic, output)"),
                });
            }
            section = Some(name);
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::ConfigLine {
            line,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        let sec = section.as_deref().ok_or_else(|| Error::ConfigLine {
            line,
            msg: format!("key `{key}` appears before any section header"),
        })?;
        let full = canonical_key(sec, key).ok_or_else(|| Error::ConfigLine {
            line,
            msg: format!("unknown key `{key}` in [{sec}]"),
        })?;
        if let Some((prev, _)) = entries.0.get(&full) {
            return Err(Error::ConfigLine {
                line,
                msg: format!("`{full}` already set on line {prev}"),
            });
        }
        entries.0.insert(full, (line, value.trim().to_string()));
    }
    Ok(entries)
}

/// Parses and validates a configuration document.
pub fn load_config(text: &str) -> Result<RunConfig> {
    load_config_with(text, &[])
}

pub fn load_config_file(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_config(&text)
}

impl RunConfig {
    /// Like [`load_config`], with `section.key = value` overrides applied on
    /// top of the document (they replace document entries).
    pub fn load_with_overrides(text: &str, overrides: &[(&str, &str)]) -> Result<RunConfig> {
        load_config_with(text, overrides)
    }
}

fn load_config_with(text: &str, overrides: &[(&str, &str)]) -> Result<RunConfig> {
    let mut entries = parse_entries(text)?;
    for (k, v) in overrides {
        let (sec, key) = k.split_once('.').ok_or_else(|| Error::ConfigField {
            field: k.to_string(),
            msg: "override keys look like `section.key`".into(),
        })?;
        let full = canonical_key(sec, key).ok_or_else(|| Error::ConfigField {
            field: k.to_string(),
            msg: "unknown key".into(),
        })?;
        entries.0.insert(full, (0, v.to_string()));
    }
    let config = build(&mut entries)?;
    config.validate()?;
    Ok(config)
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.0.remove(key)
    }

    fn diag(key: &str, line: usize, msg: String) -> Error {
        if line == 0 {
            Error::ConfigField {
                field: key.to_string(),
                msg,
            }
        } else {
            Error::ConfigLine {
                line,
                msg: format!("`{key}`: {msg}"),
            }
        }
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| Self::diag(key, line, format!("expected {what}, got `{v}`"))),
        }
    }

    fn float(&mut self, key: &str) -> Result<Option<f64>> {
        self.parse::<f64>(key, "a number")
    }

    fn with<T>(
        &mut self,
        key: &str,
        f: impl FnOnce(&str) -> std::result::Result<T, String>,
    ) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => f(&v).map(Some).map_err(|m| Self::diag(key, line, m)),
        }
    }
}

fn parse_floats(v: &str) -> std::result::Result<Vec<f64>, String> {
    v.split([',', ' ', '\t'])
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| format!("`{s}` is not a number"))
        })
        .collect()
}

fn parse_point(v: &str) -> std::result::Result<[f64; 2], String> {
    match parse_floats(v)?.as_slice() {
        [x, y] => Ok([*x, *y]),
        other => Err(format!("expected two coordinates, got {}", other.len())),
    }
}

fn parse_points(v: &str) -> std::result::Result<Vec<[f64; 2]>, String> {
    v.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(parse_point)
        .collect()
}

fn build(e: &mut Entries) -> Result<RunConfig> {
    let mut c = RunConfig::default();
    if let Some(v) = e.parse("mesh.nx", "a positive integer")? {
        c.mesh.nx = v;
    }
    if let Some(v) = e.parse("mesh.ny", "a positive integer")? {
        c.mesh.ny = v;
    }
    let b = &mut c.mesh.bounds;
    for (key, slot) in [
        ("mesh.x_min", &mut b.x_min),
        ("mesh.x_max", &mut b.x_max),
        ("mesh.y_min", &mut b.y_min),
        ("mesh.y_max", &mut b.y_max),
    ] {
        if let Some(v) = e.float(key)? {
            *slot = v;
        }
    }
    if let Some(v) = e.parse("time.N", "a positive integer")? {
        c.time.n = v;
    }
    if let Some(v) = e.float("time.gamma")? {
        c.time.gamma = v;
    }
    if let Some(v) = e.float("time.T")? {
        c.time.t_final = v;
    }

    let p = &mut c.physics;
    if let Some(v) = e.float("physics.D")? {
        p.diffusion = v;
    }
    if let Some(v) = e.float("physics.r")? {
        p.rate = v;
    }
    if let Some(v) = e.float("physics.alpha")? {
        p.alpha = v;
    }
    if let Some(v) = e.with("physics.model", |s| {
        s.parse::<ModelKind>().map_err(strip_invalid)
    })? {
        p.model = v;
    }
    if let Some(v) = e.with("physics.reaction_mode", |s| {
        s.parse::<ReactionMode>().map_err(strip_invalid)
    })? {
        p.reaction_mode = v;
    }
    let bc_value = e.take("physics.bc_value");
    let bc_kind = e.take("physics.bc");
    match bc_kind.as_ref().map(|(l, s)| (*l, s.to_ascii_lowercase())) {
        None => {
            if let Some((line, _)) = bc_value {
                return Err(Entries::diag(
                    "physics.bc_value",
                    line,
                    "only meaningful with bc = dirichlet".into(),
                ));
            }
        }
        Some((_, k)) if k == "neumann" => {
            if let Some((line, _)) = bc_value {
                return Err(Entries::diag(
                    "physics.bc_value",
                    line,
                    "only meaningful with bc = dirichlet".into(),
                ));
            }
            p.bc = BoundaryCondition::Neumann;
        }
        Some((_, k)) if k == "dirichlet" => {
            let v = match bc_value {
                None => 0.0,
                Some((line, s)) => s.parse::<f64>().map_err(|_| {
                    Entries::diag(
                        "physics.bc_value",
                        line,
                        format!("expected a number, got `{s}`"),
                    )
                })?,
            };
            p.bc = BoundaryCondition::Dirichlet(v);
        }
        Some((line, k)) => {
            return Err(Entries::diag(
                "physics.bc",
                line,
                format!("unknown boundary condition `{k}` (neumann, dirichlet)"),
            ))
        }
    }

    if let Some(v) = e.float("ic.epsilon_factor")? {
        c.epsilon_factor = v;
    }
    let kind_line = e.0.get("ic.kind").map(|(l, _)| *l);
    let kind = e
        .with("ic.kind", |s| {
            InitialCondition::from_kind(s).map_err(strip_invalid)
        })?
        .unwrap_or_default();
    let center = e.with("ic.center", parse_point)?;
    let centers = e.with("ic.centers", parse_points)?;
    let radius = e.float("ic.radius")?;
    let path = e.take("ic.path");
    let value = e.float("ic.value")?;
    let unused = |key: &str, present: bool| -> Result<()> {
        if present {
            Err(Error::ConfigField {
                field: key.to_string(),
                msg: format!("not used by ic kind `{}`", kind.kind()),
            })
        } else {
            Ok(())
        }
    };
    c.ic = match kind {
        InitialCondition::Circle { .. } => {
            unused("ic.centers", centers.is_some())?;
            unused("ic.path", path.is_some())?;
            unused("ic.value", value.is_some())?;
            InitialCondition::Circle {
                center: center.unwrap_or(CIRCLE_CENTER),
                radius: radius.unwrap_or(CIRCLE_RADIUS),
            }
        }
        InitialCondition::FourCircles { .. } => {
            unused("ic.center", center.is_some())?;
            unused("ic.path", path.is_some())?;
            unused("ic.value", value.is_some())?;
            InitialCondition::FourCircles {
                centers: centers.unwrap_or_else(|| FOUR_CIRCLE_CENTERS.to_vec()),
                radius: radius.unwrap_or(FOUR_CIRCLE_RADIUS),
            }
        }
        InitialCondition::Blob => {
            unused("ic.center", center.is_some())?;
            unused("ic.centers", centers.is_some())?;
            unused("ic.radius", radius.is_some())?;
            unused("ic.path", path.is_some())?;
            unused("ic.value", value.is_some())?;
            InitialCondition::Blob
        }
        InitialCondition::FromFile { .. } => {
            unused("ic.center", center.is_some())?;
            unused("ic.centers", centers.is_some())?;
            unused("ic.radius", radius.is_some())?;
            unused("ic.value", value.is_some())?;
            let (_, p) = path.ok_or_else(|| {
                Entries::diag(
                    "ic.path",
                    kind_line.unwrap_or(0),
                    "kind = file needs a path".into(),
                )
            })?;
            InitialCondition::FromFile {
                path: PathBuf::from(p),
            }
        }
        InitialCondition::Constant { .. } => {
            unused("ic.center", center.is_some())?;
            unused("ic.centers", centers.is_some())?;
            unused("ic.radius", radius.is_some())?;
            unused("ic.path", path.is_some())?;
            let value = value.ok_or_else(|| {
                Entries::diag(
                    "ic.value",
                    kind_line.unwrap_or(0),
                    "kind = constant needs a value".into(),
                )
            })?;
            InitialCondition::Constant { value }
        }
    };

    let o = &mut c.output;
    if let Some((_, v)) = e.take("output.directory") {
        o.directory = PathBuf::from(v);
    }
    if let Some((_, v)) = e.take("output.name") {
        o.name = Some(v);
    }
    if let Some(v) = e.with("output.snapshot_times", parse_floats)? {
        o.snapshot_times = Some(v);
    }
    if let Some(v) = e.with("output.formats", |s| {
        if s.trim().eq_ignore_ascii_case("none") {
            return Ok(Vec::new());
        }
        s.split(',')
            .map(|f| f.trim().parse::<SnapshotFormat>().map_err(strip_invalid))
            .collect()
    })? {
        o.formats = v;
    }
    debug_assert!(e.0.is_empty(), "unconsumed keys: {:?}", e.0.keys());
    Ok(c)
}
