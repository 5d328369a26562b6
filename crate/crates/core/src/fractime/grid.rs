use crate::error::{Error, Result};

/// Graded temporal grid `t_n = (n/N)^γ T`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    final_time: f64,
    gamma: f64,
    points: Vec<f64>,
    steps: Vec<f64>,
}

impl TimeGrid {
    /// Builds the graded grid. `gamma = 1` gives a uniform grid.
    pub fn graded(n_steps: usize, gamma: f64, final_time: f64) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::invalid("time grid needs at least one step"));
        }
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(Error::invalid(format!(
                "final time must be positive, got {final_time}"
            )));
        }
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!(
                "grading exponent must be >= 1, got {gamma}"
            )));
        }
        let n = n_steps as f64;
        let mut points: Vec<f64> = (0..=n_steps)
            .map(|i| (i as f64 / n).powf(gamma) * final_time)
            .collect();
        points[n_steps] = final_time;
        let steps = points.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            final_time,
            gamma,
            points,
            steps,
        })
    }

    /// Grid from explicit, strictly increasing points starting at zero.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 || points[0] != 0.0 {
            return Err(Error::invalid(
                "grid points must start at 0 and contain a step",
            ));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid points must be strictly increasing"));
        }
        let steps = points.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            final_time: *points.last().unwrap(),
            gamma: f64::NAN,
            points,
            steps,
        })
    }

    /// Number of steps `N`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    /// Grading exponent; NaN for grids built from explicit points.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `t_0..=t_N`.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn t(&self, n: usize) -> f64 {
        self.points[n]
    }

    /// `Δt_n = t_n − t_{n−1}` for `n = 1..=N`.
    pub fn dt(&self, n: usize) -> f64 {
        self.steps[n - 1]
    }

    /// `Δt_1..=Δt_N`.
    pub fn steps(&self) -> &[f64] {
        &self.steps
    }

    pub(crate) fn check_step(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.len() {
            return Err(Error::StepOutOfRange { n, max: self.len() });
        }
        Ok(())
    }

    /// Index of the grid point closest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        let idx = self.points.partition_point(|&p| p < t);
        if idx == 0 {
            return 0;
        }
        if idx > self.len() {
            return self.len();
        }
        if (self.points[idx] - t) < (t - self.points[idx - 1]) {
            idx
        } else {
            idx - 1
        }
    }
}

/// Convenience wrapper around [`TimeGrid::graded`].
pub fn graded_grid(n_steps: usize, gamma: f64, final_time: f64) -> Result<TimeGrid> {
    TimeGrid::graded(n_steps, gamma, final_time)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quadratic_grading_example() {
        let g = graded_grid(4, 2.0, 5.0).unwrap();
        assert_eq!(g.points(), &[0.0, 0.3125, 1.25, 2.8125, 5.0]);
    }

    #[test]
    fn uniform_example() {
        let g = graded_grid(2, 1.0, 1.0).unwrap();
        assert_eq!(g.points(), &[0.0, 0.5, 1.0]);
        assert_eq!(g.steps(), &[0.5, 0.5]);
    }

    #[test]
    fn first_point_of_default_grid() {
        let g = graded_grid(128, 2.0, 5.0).unwrap();
        assert!((g.t(1) - 5.0 / (128.0 * 128.0)).abs() < 1e-18);
        assert!((g.t(1) - 3.0518e-4).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(graded_grid(0, 2.0, 1.0).is_err());
        assert!(graded_grid(4, 0.5, 1.0).is_err());
        assert!(graded_grid(4, 2.0, 0.0).is_err());
        assert!(graded_grid(4, 2.0, -1.0).is_err());
        assert!(graded_grid(4, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn nearest_index_rounds() {
        let g = graded_grid(4, 1.0, 4.0).unwrap();
        assert_eq!(g.nearest_index(-1.0), 0);
        assert_eq!(g.nearest_index(1.4), 1);
        assert_eq!(g.nearest_index(1.6), 2);
        assert_eq!(g.nearest_index(9.0), 4);
    }

    proptest! {
        #[test]
        fn invariants(n in 1usize..400, gamma in 1.0f64..4.0, t_final in 0.01f64..100.0) {
            let g = graded_grid(n, gamma, t_final).unwrap();
            prop_assert_eq!(g.t(0), 0.0);
            prop_assert_eq!(g.t(n), t_final);
            for i in 1..=n {
                prop_assert!(g.dt(i) > 0.0);
                let exact = (i as f64 / n as f64).powf(gamma) * t_final;
                prop_assert!((g.t(i) - exact).abs() <= 1e-14 * exact);
            }
        }
    }
}
