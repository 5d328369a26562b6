use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::femspace::BoundaryCondition;

/// Which fractional Fisher–KPP formulation to advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ModelKind {
    /// `C∂^α u = DΔu + r g_{1−α} * (u − u²)`.
    #[default]
    Consistent,
    /// `C∂^α u = DΔu + r (u − u²)`.
    CaputoInTime,
}

/// Treatment of the history-convolved reaction term in the consistent model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ReactionMode {
    /// Left-endpoint rule on every interval; one linear SPD solve per step.
    #[default]
    ExplicitHistory,
    /// The last interval's weight multiplies the unknown; Newton per step.
    ImplicitLastInterval,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Consistent => "consistent",
            ModelKind::CaputoInTime => "caputo",
        }
    }
}

impl ReactionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReactionMode::ExplicitHistory => "explicit",
            ReactionMode::ImplicitLastInterval => "implicit",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for ReactionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "consistent" | "rl" | "a" => Ok(ModelKind::Consistent),
            "caputo" | "caputo_in_time" | "caputointime" | "b" => Ok(ModelKind::CaputoInTime),
            other => Err(Error::invalid(format!(
                "unknown model `{other}` (expected `consistent` or `caputo`)"
            ))),
        }
    }
}

impl FromStr for ReactionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "explicit" | "explicit_history" => Ok(ReactionMode::ExplicitHistory),
            "implicit" | "implicit_last_interval" => Ok(ReactionMode::ImplicitLastInterval),
            other => Err(Error::invalid(format!(
                "unknown reaction mode `{other}` (expected `explicit` or `implicit`)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub diffusion: f64,
    pub rate: f64,
    pub alpha: f64,
    pub model: ModelKind,
    pub bc: BoundaryCondition,
    pub reaction_mode: ReactionMode,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            diffusion: 1e-3,
            rate: 5.0,
            alpha: 0.5,
            model: ModelKind::Consistent,
            bc: BoundaryCondition::Neumann,
            reaction_mode: ReactionMode::ExplicitHistory,
        }
    }
}

impl ModelParams {
    /// `D` must be positive, except that `D = 0` is accepted to freeze
    /// transport entirely (pure-reaction runs).
    pub fn validate(&self) -> Result<()> {
        if !(self.diffusion >= 0.0) || !self.diffusion.is_finite() {
            return Err(Error::invalid(format!(
                "diffusion D must be >= 0, got {}",
                self.diffusion
            )));
        }
        if !(self.rate >= 0.0) || !self.rate.is_finite() {
            return Err(Error::invalid(format!(
                "growth rate r must be >= 0, got {}",
                self.rate
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::invalid(format!(
                "alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if let BoundaryCondition::Dirichlet(v) = self.bc {
            if !v.is_finite() {
                return Err(Error::invalid("dirichlet value must be finite"));
            }
        }
        Ok(())
    }
}
