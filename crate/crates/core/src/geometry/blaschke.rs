use crate::error::{Error, Result};
use crate::C64;

/// Möbius factor `B(z) = (z − z₀)/(1 − z̄₀z)`, with `|B| = exp G(·, z₀)` on the disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Blaschke {
    pub z0: C64,
}

impl Blaschke {
    pub fn new(z0: C64) -> Result<Self> {
        if z0.norm() < 1.0 {
            Ok(Blaschke { z0 })
        } else {
            Err(Error::OutOfDomain(format!("Blaschke zero {z0} not in the disk")))
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        (z - self.z0) / (C64::new(1.0, 0.0) - self.z0.conj() * z)
    }

    /// `B′(z) = (1 − |z₀|²)/(1 − z̄₀z)²`.
    pub fn derivative(&self, z: C64) -> C64 {
        let d = C64::new(1.0, 0.0) - self.z0.conj() * z;
        (1.0 - self.z0.norm_sqr()) / (d * d)
    }

    pub fn log_derivative(&self, z: C64) -> C64 {
        self.derivative(z) / self.eval(z)
    }
}

/// Free-function form of [`Blaschke::new`].
pub fn blaschke(z0: C64) -> Result<Blaschke> {
    Blaschke::new(z0)
}
