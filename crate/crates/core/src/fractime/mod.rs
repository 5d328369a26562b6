//! Temporal machinery: kernels, graded grids, quadrature weights, L1
//! coefficients and special functions.

mod gamma;
mod grid;
mod mittag_leffler;
pub mod quad;
mod sonine;
mod weights;

pub use gamma::{gamma, ln_gamma};
pub use grid::{graded_grid, TimeGrid};
pub use mittag_leffler::{mittag_leffler, SERIES_SWITCH};
pub use sonine::{check_sonine, check_sonine_against, kernel_convolution};
pub use weights::{
    caputo_l1_apply, conv_weights, discrete_convolution, kernel_g, l1_coeffs, l1_from_weights,
    ConvWeights, L1Coeffs, WeightTable,
};

pub(crate) use weights::check_order;

/// Compensated (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Neumaier::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}
