//! Green functions, capacities, harmonic extensions and Blaschke factors.

mod blaschke;
mod domain;
mod green;
mod harmonic;

pub use blaschke::{blaschke, Blaschke};
pub use domain::{Component, Domain};
pub(crate) use green::check_distinct;
pub use green::Green;
pub use harmonic::{holomorphic_exponent, HarmonicExtension, HolomorphicExponent};

use crate::error::Result;
use crate::C64;

pub fn green_value(domain: Domain, z: C64, w: C64) -> Result<f64> {
    Green::new(domain).value(z, w)
}

pub fn green_normal_derivative(domain: Domain, c: Component, theta: f64, w: C64) -> Result<f64> {
    Green::new(domain).normal_derivative(c, theta, w)
}

/// Logarithmic capacity `c_β(z)` (not its logarithm).
pub fn log_capacity(domain: Domain, z: C64) -> Result<f64> {
    Green::new(domain).capacity(z)
}

pub fn green_interaction(domain: Domain, points: &[C64], weights: &[f64]) -> Result<Vec<f64>> {
    Green::new(domain).interaction(points, weights)
}

pub fn harmonic_extension(domain: Domain, outer: Vec<f64>, inner: Vec<f64>) -> Result<HarmonicExtension> {
    HarmonicExtension::from_samples(domain, outer, inner)
}
