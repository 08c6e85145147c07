//! Shared fixtures for the criterion benchmarks in `benches/`.

use sparsecov::datagen::{c1_covariance, c2_covariance, sample_gaussian_data, C2Config};
use sparsecov::matrix::DataMatrix;

/// Synthetic dataset drawn from the fixed 12-variable sparse covariance.
pub fn c1_dataset(n: usize) -> DataMatrix {
    sample_gaussian_data(&c1_covariance(), n, 0xBE7C4).expect("C1 is positive definite")
}

/// Synthetic dataset drawn from a 50-variable random sparse covariance.
pub fn c2_dataset(n: usize, mu: f64) -> DataMatrix {
    let truth = c2_covariance(&C2Config::new(50, mu, 0xBE7C5)).expect("valid config");
    sample_gaussian_data(&truth.sigma, n, 0xBE7C6).expect("repaired truth is positive definite")
}
