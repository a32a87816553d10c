use serde::{Deserialize, Serialize};

use super::domain::{Component, Domain};
use crate::error::{Error, Result};
use crate::tol;
use crate::C64;

/// Green function evaluator `G(z, w) = log|z − w| + H(z, w)`.
///
/// On the disk `H(z, w) = −log|1 − w̄z|`. On the annulus `H(·, w)` is the
/// harmonic function with boundary values `−log|z − w|`, expanded in
/// `{1, log|z|, zⁿ, z⁻ⁿ}`. The expansion starts with `series_order` terms and
/// doubles until two consecutive partial sums agree to `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Green {
    pub domain: Domain,
    pub series_order: usize,
    pub tolerance: f64,
}

const MAX_TERMS: usize = 1 << 17;

impl Green {
    pub fn new(domain: Domain) -> Self {
        Green {
            domain,
            series_order: 64,
            tolerance: tol::SERIES_TAIL,
        }
    }

    pub fn with_order(domain: Domain, series_order: usize) -> Self {
        Green {
            series_order: series_order.max(1),
            ..Green::new(domain)
        }
    }

    /// Annulus expansion truncated at exactly `n` terms, no doubling.
    pub fn truncated_regular(&self, z: C64, w: C64, n: usize) -> f64 {
        match self.domain {
            Domain::Disk => disk_regular(z, w),
            Domain::Annulus { q } => annulus_series(q, z, w, n, None).0,
        }
    }

    /// `G(z, w)` for `z` in the closed domain and `w` interior.
    pub fn value(&self, z: C64, w: C64) -> Result<f64> {
        self.domain.require_closed(z)?;
        self.domain.require_interior(w)?;
        if (z - w).norm() < tol::COINCIDENT {
            return Err(Error::Pole);
        }
        Ok(self.value_unchecked(z, w))
    }

    pub(crate) fn value_unchecked(&self, z: C64, w: C64) -> f64 {
        (z - w).norm().ln() + self.regular(z, w)
    }

    /// Regular part `H(z, w)`.
    pub fn regular(&self, z: C64, w: C64) -> f64 {
        match self.domain {
            Domain::Disk => disk_regular(z, w),
            Domain::Annulus { q } => annulus_series(q, z, w, self.series_order, Some(self.tolerance)).0,
        }
    }

    /// `2∂G/∂z`, so that `∇G = conj` of this value read as a vector.
    pub fn gradient(&self, z: C64, w: C64) -> C64 {
        let sing = (z - w).inv();
        match self.domain {
            Domain::Disk => sing + w.conj() / (C64::new(1.0, 0.0) - w.conj() * z),
            Domain::Annulus { q } => sing + annulus_series(q, z, w, self.series_order, Some(self.tolerance)).1,
        }
    }

    /// Outer normal derivative of `G(·, w)` at polar angle `theta` on `c`.
    pub fn normal_derivative(&self, c: Component, theta: f64, w: C64) -> Result<f64> {
        self.domain.require_interior(w)?;
        Ok(self.normal_derivative_unchecked(c, theta, w))
    }

    pub(crate) fn normal_derivative_unchecked(&self, c: Component, theta: f64, w: C64) -> f64 {
        let z = self.domain.boundary_point(c, theta);
        (self.domain.outer_normal(c, theta) * self.gradient(z, w)).re
    }

    /// Logarithmic capacity `c_β(z) = exp H(z, z)`.
    pub fn capacity(&self, z: C64) -> Result<f64> {
        self.domain.require_interior(z)?;
        Ok(self.regular(z, z).exp())
    }

    /// Harmonic measure of the inner circle seen from `z`; zero on the disk.
    pub fn harmonic_measure_inner(&self, z: C64) -> f64 {
        match self.domain {
            Domain::Disk => 0.0,
            Domain::Annulus { q } => z.norm().ln() / q.ln(),
        }
    }

    /// `tⱼ = exp(−2 Σ_{i≠j} wᵢ G(zⱼ, zᵢ))` with weights `wᵢ = kᵢ + 1`.
    pub fn interaction(&self, points: &[C64], weights: &[f64]) -> Result<Vec<f64>> {
        if points.len() != weights.len() {
            return Err(Error::InvalidInput("points and weights differ in length".into()));
        }
        check_distinct(points)?;
        for &z in points {
            self.domain.require_interior(z)?;
        }
        Ok(points
            .iter()
            .enumerate()
            .map(|(j, &zj)| {
                let s: f64 = points
                    .iter()
                    .zip(weights)
                    .enumerate()
                    .filter(|(i, _)| *i != j)
                    .map(|(_, (&zi, &wi))| wi * self.value_unchecked(zj, zi))
                    .sum();
                (-2.0 * s).exp()
            })
            .collect())
    }
}

pub(crate) fn check_distinct(points: &[C64]) -> Result<()> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() < tol::COINCIDENT {
                return Err(Error::CoincidentPoles(i, j));
            }
        }
    }
    Ok(())
}

fn disk_regular(z: C64, w: C64) -> f64 {
    -(C64::new(1.0, 0.0) - w.conj() * z).norm().ln()
}

/// Regular part of the annulus Green function and its `2∂/∂z`.
///
/// With `u₁ = w̄z, u₂ = q²z/w, u₃ = q²/(w̄z), u₄ = q²w/z`:
/// `H = B log|z| + Re Σ (u₁ⁿ − u₂ⁿ + u₃ⁿ − u₄ⁿ)/(n(1 − q²ⁿ))`, `B = log|w|/log(1/q)`.
fn annulus_series(q: f64, z: C64, w: C64, order: usize, tol: Option<f64>) -> (f64, C64) {
    let b = -w.norm().ln() / q.ln();
    let q2 = q * q;
    let u = [w.conj() * z, z * q2 / w, C64::from(q2) / (w.conj() * z), w * q2 / z];
    let mut p = [C64::new(1.0, 0.0); 4];
    let mut q2n = 1.0;
    let mut val = 0.0;
    let mut grad = C64::new(0.0, 0.0);
    let mut checkpoint = order.max(1);
    let mut last_val = f64::NAN;
    let mut last_grad = C64::new(f64::NAN, 0.0);
    let mut n = 0usize;
    loop {
        n += 1;
        for k in 0..4 {
            p[k] *= u[k];
        }
        q2n *= q2;
        let d = 1.0 - q2n;
        let s = p[0] - p[1] + p[2] - p[3];
        let g = p[0] - p[1] - p[2] + p[3];
        val += s.re / (n as f64 * d);
        grad += g / d;
        if n == checkpoint {
            let Some(tol) = tol else { break };
            let dv = (val - last_val).abs();
            let dg = (grad - last_grad).norm() / z.norm();
            if (dv <= tol && dg <= tol * 1e3) || n >= MAX_TERMS {
                break;
            }
            last_val = val;
            last_grad = grad;
            checkpoint *= 2;
        }
    }
    (b * z.norm().ln() + val, (grad + b) / z)
}
