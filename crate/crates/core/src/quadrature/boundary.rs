use std::f64::consts::TAU;

use crate::geometry::{Component, Domain};
use crate::C64;

/// Uniform trapezoid grid on each boundary circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryGrid {
    pub domain: Domain,
    pub n: usize,
}

/// Boundary quadrature node; `weight` is the arclength element `R·2π/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryNode {
    pub component: Component,
    pub theta: f64,
    pub z: C64,
    pub weight: f64,
}

impl BoundaryGrid {
    pub fn new(domain: Domain, n: usize) -> Self {
        BoundaryGrid { domain, n: n.max(1) }
    }

    pub fn nodes(&self) -> Vec<BoundaryNode> {
        let mut out = Vec::with_capacity(self.n * self.domain.components().len());
        for &c in self.domain.components() {
            let r = self.domain.radius(c);
            for i in 0..self.n {
                let theta = TAU * i as f64 / self.n as f64;
                out.push(BoundaryNode {
                    component: c,
                    theta,
                    z: C64::from_polar(r, theta),
                    weight: r * TAU / self.n as f64,
                });
            }
        }
        out
    }
}

/// `(1/2π) ∮ f·weight |dz|` over all boundary components.
pub fn integrate_boundary(
    grid: &BoundaryGrid,
    f: impl Fn(&BoundaryNode) -> f64 + Sync + Send,
    weight: impl Fn(&BoundaryNode) -> f64 + Sync + Send,
) -> f64 {
    let nodes = grid.nodes();
    crate::par::sum(&nodes, |n| f(n) * weight(n) * n.weight) / TAU
}
