use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_distinct, Domain};
use crate::C64;

/// Prescribed Taylor coefficients `a_{j,l} = f^{(l)}(zⱼ)/l!`, `l = 0..=kⱼ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetPoint {
    pub z: C64,
    pub taylor: Vec<C64>,
}

impl JetPoint {
    pub fn k(&self) -> usize {
        self.taylor.len() - 1
    }

    /// Lowest order with a nonzero coefficient.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.taylor.iter().position(|a| a.norm() > 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jets {
    pub points: Vec<JetPoint>,
}

impl Jets {
    pub fn new(points: Vec<JetPoint>) -> Self {
        Jets { points }
    }

    pub fn value(z: C64, a: C64) -> Self {
        Jets::new(vec![JetPoint { z, taylor: vec![a] }])
    }

    pub fn taylor(z: C64, taylor: Vec<C64>) -> Self {
        Jets::new(vec![JetPoint { z, taylor }])
    }

    /// Build from derivative values `f^{(l)}(z)`.
    pub fn from_derivatives(z: C64, derivs: &[C64]) -> Self {
        let mut fact = 1.0;
        let taylor = derivs
            .iter()
            .enumerate()
            .map(|(l, d)| {
                if l > 0 {
                    fact *= l as f64;
                }
                d / fact
            })
            .collect();
        Jets::taylor(z, taylor)
    }

    pub fn points(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.z).collect()
    }

    pub fn n_rows(&self) -> usize {
        self.points.iter().map(|p| p.taylor.len()).sum()
    }

    pub fn max_order(&self) -> usize {
        self.points.iter().map(|p| p.k()).max().unwrap_or(0)
    }

    pub fn rhs(&self) -> Vec<C64> {
        self.points.iter().flat_map(|p| p.taylor.iter().copied()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.rhs().iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scaled(&self, s: C64) -> Self {
        Jets::new(
            self.points
                .iter()
                .map(|p| JetPoint {
                    z: p.z,
                    taylor: p.taylor.iter().map(|a| a * s).collect(),
                })
                .collect(),
        )
    }

    pub fn validate(&self, domain: Domain) -> Result<()> {
        if self.points.is_empty() || self.points.iter().any(|p| p.taylor.is_empty()) {
            return Err(Error::InvalidInput("empty jet table".into()));
        }
        if self.norm_sqr() == 0.0 {
            return Err(Error::InvalidInput("all prescribed jets are zero".into()));
        }
        for p in &self.points {
            domain.require_interior(p.z)?;
        }
        check_distinct(&self.points())
    }
}
