//! Shared fixtures for the criterion benches.

use dsu11::InterferometerConfig;

/// The parameter point used throughout the figures: `g = r = |β| = 1`.
pub fn unit_point(gamma: f64) -> InterferometerConfig {
    InterferometerConfig::figure(1.0, 1.0, 1.0, gamma)
}
