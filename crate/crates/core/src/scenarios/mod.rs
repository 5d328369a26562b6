//! Initial conditions and run configurations.

mod config;
mod ic;

pub use config::{load_config, load_config_file, MeshSpec, OutputSpec, RunConfig, TimeSpec};
pub use ic::{
    ic_smoothed, levelset_blob, levelset_circle, levelset_four_circles, smoothed_indicator,
    InitialCondition, BLOB_OUTSIDE, CIRCLE_CENTER, CIRCLE_RADIUS, FOUR_CIRCLE_CENTERS,
    FOUR_CIRCLE_RADIUS,
};
