use std::path::Path;

use super::io::{snapshot_file_name, write_snapshot, TimeseriesWriter};
use crate::error::{Error, Result};
use crate::fractime::TimeGrid;
use crate::models::{run_observed, Trajectory};
use crate::scenarios::RunConfig;

/// Grid levels closest to the requested snapshot times, sorted, without repeats.
pub fn snapshot_indices(grid: &TimeGrid, times: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = times.iter().map(|&t| grid.nearest_index(t)).collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// Runs `config` and writes `<dir>/<name>/{config.resolved, timeseries.csv, snapshots/}`.
///
/// Rows and snapshots are written as levels complete, so a solver failure
/// leaves the finished part of the run on disk.
pub fn execute_run(config: &RunConfig) -> Result<Trajectory> {
    let dir = config.run_dir();
    let snap_dir = dir.join("snapshots");
    let mkdir = |p: &Path| std::fs::create_dir_all(p).map_err(|e| Error::io(p, e));
    mkdir(&dir)?;
    if !config.output.formats.is_empty() {
        mkdir(&snap_dir)?;
    }
    let resolved = dir.join("config.resolved");
    std::fs::write(&resolved, config.to_document()).map_err(|e| Error::io(&resolved, e))?;

    let mesh = config.mesh()?;
    let grid = config.grid()?;
    let wanted = snapshot_indices(&grid, &config.snapshot_times());
    let mut ts = TimeseriesWriter::create(dir.join("timeseries.csv"))?;
    let result = run_observed(config, |n, u, row| {
        ts.push(row)?;
        if wanted.binary_search(&n).is_ok() {
            for &f in &config.output.formats {
                let path = snap_dir.join(snapshot_file_name(grid.t(n), f));
                write_snapshot(&mesh, u, grid.t(n), &path, f)?;
            }
        }
        Ok(())
    });
    if let Err(e) = &result {
        log::error!(
            "run {} aborted: {e}; partial output kept in {}",
            config.run_name(),
            dir.display()
        );
    }
    result
}
