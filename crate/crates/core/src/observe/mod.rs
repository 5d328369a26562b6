//! Observables, writers, model comparison and the oracle suite.

mod compare;
mod io;
mod output;
mod record;
mod verify;

pub use compare::{compare_models, first_crossing, t_half, write_comparison, Comparison};
pub use io::{
    read_csv_grid, read_timeseries, snapshot_file_name, write_snapshot, write_timeseries,
    SnapshotFormat, TimeseriesWriter, TIMESERIES_HEADER,
};
pub use output::{execute_run, snapshot_indices};
pub use record::{record, ObservableRow};
pub use verify::{format_table, run_oracle_suite, OracleCheck};
