//! Time steppers for the consistent and Caputo-in-time models.

mod history;
mod params;
mod run;
mod scalar;
mod stepper;


pub use history::History;
pub use params::{ModelKind, ModelParams, ReactionMode};
pub use run::{run, run_observed, simulate, Trajectory};
pub use scalar::{scalar_solve, ScalarProblem, ScalarReaction};
pub use stepper::{StepState, StepStats};
