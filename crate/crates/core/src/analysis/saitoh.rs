use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::Domain;
use crate::minimizers::{kernel_bergman, kernel_conjugate_hardy, Settings};
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SaitohReport {
    pub k_hat: f64,
    pub pi_b: f64,
    pub gap: f64,
    /// Change of the gap between the base and a 1.5× refined resolution,
    /// floored at `1e−12·K̂`.
    pub error_estimate: f64,
}

/// `K̂(z) − πB(z)` for the conjugate Hardy and Bergman kernels.
pub fn saitoh_gap(domain: Domain, z: C64, settings: &Settings) -> Result<SaitohReport> {
    domain.validate()?;
    domain.require_interior(z)?;
    let run = |s: &Settings| -> Result<(f64, f64)> {
        Ok((
            kernel_conjugate_hardy(domain, z, s)?,
            PI * kernel_bergman(domain, z, s)?,
        ))
    };
    let (k_hat, pi_b) = run(settings)?;
    let (k2, b2) = run(&settings.refined(1.5))?;
    let gap = k_hat - pi_b;
    let error_estimate = ((k2 - b2) - gap).abs().max(1e-12 * k_hat.abs());
    Ok(SaitohReport {
        k_hat,
        pi_b,
        gap,
        error_estimate,
    })
}
