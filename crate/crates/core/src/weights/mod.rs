//! ψ, φ, the gain `c`, and the weights `ρ = e^{−φ}(∂ψ/∂v)⁻¹`, `ρ̃ = e^{−φ}c(−2ψ)`.

mod gain;
mod phi;
mod psi;

pub use gain::{Gain, GainReport};
pub use phi::PhiSpec;
pub use psi::{psi_eval, psi_normal_derivative, Pole, PsiSpec};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Component, Green};
use crate::minimizers::Jets;
use crate::C64;

/// Boundary and interior weights built from `(φ, ψ, c)`.
#[derive(Clone, Copy, Debug)]
pub struct WeightPair<'a> {
    pub green: &'a Green,
    pub phi: &'a PhiSpec,
    pub psi: &'a PsiSpec,
    pub gain: &'a Gain,
}

impl WeightPair<'_> {
    /// `ρ = e^{−φ}(∂ψ/∂v)⁻¹` at polar angle `theta` on component `c`.
    pub fn rho_boundary(&self, c: Component, theta: f64) -> f64 {
        let z = self.green.domain.boundary_point(c, theta);
        (-self.phi.eval(self.green, z)).exp() / self.psi.normal_derivative(self.green, c, theta)
    }

    /// `ρ̃ = e^{−φ}c(−2ψ)`.
    pub fn rho_tilde(&self, z: C64) -> f64 {
        (-self.phi.eval(self.green, z)).exp() * self.gain.c(-2.0 * self.psi.eval(self.green, z))
    }

    /// `|V|²ρ̃` with `V` the divisor polynomial of φ.
    pub fn rho_tilde_reduced(&self, z: C64) -> f64 {
        (-self.phi.reduced(self.green, z)).exp() * self.gain.c(-2.0 * self.psi.eval(self.green, z))
    }
}

/// Lelong numbers `v(dd^c(φ + 2ψ), zⱼ)` against the requirement `2(kⱼ + 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LelongReport {
    pub numbers: Vec<f64>,
    pub required: Vec<f64>,
}

pub fn lelong_check(phi: &PhiSpec, psi: &PsiSpec, jets: &Jets) -> Result<LelongReport> {
    let mut numbers = vec![];
    let mut required = vec![];
    for (j, pt) in jets.points.iter().enumerate() {
        let v = 2.0 * phi.green_weight_at(pt.z) + 2.0 * psi.weight_at(pt.z) + 2.0 * phi.zero_part.order_at(pt.z) as f64;
        let need = 2.0 * (pt.k() as f64 + 1.0);
        if v < need - 1e-12 {
            return Err(Error::LelongFailed(j));
        }
        numbers.push(v);
        required.push(need);
    }
    Ok(LelongReport { numbers, required })
}
