use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_distinct, Component, Green};
use crate::C64;

/// One pole `p G(·, z)` of ψ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub z: C64,
    pub p: f64,
}

/// `ψ = Σ pⱼ G(·, zⱼ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiSpec {
    pub poles: Vec<Pole>,
}

impl PsiSpec {
    pub fn new(poles: Vec<Pole>) -> Self {
        PsiSpec { poles }
    }

    pub fn single(z: C64, p: f64) -> Self {
        PsiSpec {
            poles: vec![Pole { z, p }],
        }
    }

    pub fn validate(&self, green: &Green) -> Result<()> {
        if self.poles.is_empty() {
            return Err(Error::InvalidInput("ψ needs at least one pole".into()));
        }
        for pole in &self.poles {
            if !(pole.p > 0.0 && pole.p.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "pole weight must be positive, got {}",
                    pole.p
                )));
            }
            green.domain.require_interior(pole.z)?;
        }
        check_distinct(&self.points())
    }

    pub fn points(&self) -> Vec<C64> {
        self.poles.iter().map(|p| p.z).collect()
    }

    /// Weight of the pole at `z`, zero if there is none.
    pub fn weight_at(&self, z: C64) -> f64 {
        self.poles
            .iter()
            .find(|p| (p.z - z).norm() < crate::tol::COINCIDENT)
            .map_or(0.0, |p| p.p)
    }

    /// `ψ(z)`; `−∞` at a pole.
    pub fn eval(&self, green: &Green, z: C64) -> f64 {
        let mut s = 0.0;
        for pole in &self.poles {
            let d = (z - pole.z).norm();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            s += pole.p * (d.ln() + green.regular(z, pole.z));
        }
        s
    }

    /// `2∂ψ/∂z`.
    pub fn gradient(&self, green: &Green, z: C64) -> C64 {
        self.poles.iter().map(|p| p.p * green.gradient(z, p.z)).sum()
    }

    /// `∂ψ/∂v` at polar angle `theta` on component `c`.
    pub fn normal_derivative(&self, green: &Green, c: Component, theta: f64) -> f64 {
        self.poles
            .iter()
            .map(|p| p.p * green.normal_derivative_unchecked(c, theta, p.z))
            .sum()
    }
}

pub fn psi_eval(green: &Green, psi: &PsiSpec, z: C64) -> f64 {
    psi.eval(green, z)
}

pub fn psi_normal_derivative(green: &Green, psi: &PsiSpec, c: Component, theta: f64) -> f64 {
    psi.normal_derivative(green, c, theta)
}
