use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// A planar domain: the unit disk or the annulus `q < |z| < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Disk,
    Annulus { q: f64 },
}

/// A boundary circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    /// `|z| = 1`
    Outer,
    /// `|z| = q`
    Inner,
}

impl Domain {
    pub fn annulus(q: f64) -> Result<Self> {
        if q > 0.0 && q < 1.0 {
            Ok(Domain::Annulus { q })
        } else {
            Err(Error::InvalidInput(format!("annulus needs 0 < q < 1, got {q}")))
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Domain::Disk => Ok(()),
            Domain::Annulus { q } => Domain::annulus(q).map(|_| ()),
        }
    }

    /// Inner radius; zero for the disk.
    pub fn inner_radius(&self) -> f64 {
        match *self {
            Domain::Disk => 0.0,
            Domain::Annulus { q } => q,
        }
    }

    pub fn components(&self) -> &'static [Component] {
        match self {
            Domain::Disk => &[Component::Outer],
            Domain::Annulus { .. } => &[Component::Outer, Component::Inner],
        }
    }

    pub fn radius(&self, c: Component) -> f64 {
        match c {
            Component::Outer => 1.0,
            Component::Inner => self.inner_radius(),
        }
    }

    pub fn is_interior(&self, z: C64) -> bool {
        let r = z.norm();
        match self {
            Domain::Disk => r < 1.0,
            Domain::Annulus { q } => r < 1.0 && r > *q,
        }
    }

    pub fn is_closed_member(&self, z: C64) -> bool {
        let r = z.norm();
        let eps = 1e-12;
        r <= 1.0 + eps && r >= self.inner_radius() - eps && z.is_finite()
    }

    pub fn require_interior(&self, z: C64) -> Result<()> {
        if self.is_interior(z) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!("{z} is not interior")))
        }
    }

    pub fn require_closed(&self, z: C64) -> Result<()> {
        if self.is_closed_member(z) {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!("{z} is outside the closed domain")))
        }
    }

    /// Boundary point at polar angle `theta` on component `c`.
    pub fn boundary_point(&self, c: Component, theta: f64) -> C64 {
        C64::from_polar(self.radius(c), theta)
    }

    /// Outer unit normal at polar angle `theta`. It points into the hole on
    /// the inner circle.
    pub fn outer_normal(&self, c: Component, theta: f64) -> C64 {
        let e = C64::from_polar(1.0, theta);
        match c {
            Component::Outer => e,
            Component::Inner => -e,
        }
    }

    /// Area of the domain.
    pub fn area(&self) -> f64 {
        let q = self.inner_radius();
        std::f64::consts::PI * (1.0 - q * q)
    }
}
