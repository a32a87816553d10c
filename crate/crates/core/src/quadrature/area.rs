use std::f64::consts::TAU;

use super::rules::gauss_legendre;
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::tol;
use crate::C64;

/// Polar tensor grid: `n_theta` uniform rays, `n_r` Gauss–Legendre nodes per
/// radial segment. `ray_samples` controls the scan that locates sublevel-set
/// boundaries along each ray.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaGrid {
    pub domain: Domain,
    pub n_r: usize,
    pub n_theta: usize,
    pub ray_samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AreaNode {
    pub z: C64,
    pub weight: f64,
}

impl AreaGrid {
    pub fn new(domain: Domain, n_r: usize, n_theta: usize) -> Self {
        AreaGrid {
            domain,
            n_r: n_r.max(1),
            n_theta: n_theta.max(1),
            ray_samples: 256,
        }
    }

    pub fn theta(&self, i: usize) -> f64 {
        TAU * i as f64 / self.n_theta as f64
    }

    fn r_range(&self) -> (f64, f64) {
        (self.domain.inner_radius(), 1.0)
    }
}

/// Part of the domain cut out along each ray as a union of radial segments.
///
/// Segment ends on a level set are located by bisection, so quadrature is
/// fitted to the region instead of masking node centres.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub grid: AreaGrid,
    pub rays: Vec<Vec<(f64, f64)>>,
}

impl Region {
    /// The whole domain.
    pub fn full(grid: AreaGrid) -> Self {
        let (a, b) = grid.r_range();
        Region {
            grid,
            rays: vec![vec![(a, b)]; grid.n_theta],
        }
    }

    /// `{z : level(z) < 0}`; `level` may return `−∞` at poles.
    pub fn from_level(grid: AreaGrid, level: impl Fn(C64) -> f64 + Sync + Send) -> Self {
        let (a, b) = grid.r_range();
        let s = grid.ray_samples.max(2);
        let rays = crate::par::map_range(grid.n_theta, |i| {
            let e = C64::from_polar(1.0, grid.theta(i));
            let f = |r: f64| level(e * r);
            let rs: Vec<f64> = (0..=s).map(|k| a + (b - a) * k as f64 / s as f64).collect();
            let vals: Vec<f64> = rs.iter().map(|&r| f(r)).collect();
            segments_from_samples(&rs, &vals, &f)
        });
        Region { grid, rays }
    }

    /// Sublevel set `{2ψ < −t}` of a function `psi`.
    pub fn sublevel(grid: AreaGrid, psi: impl Fn(C64) -> f64 + Sync + Send, t: f64) -> Self {
        if t <= 0.0 {
            return Region::full(grid);
        }
        Region::from_level(grid, move |z| 2.0 * psi(z) + t)
    }

    /// Complement within the domain, ray by ray.
    pub fn complement(&self) -> Region {
        let (a, b) = self.grid.r_range();
        let rays = self
            .rays
            .iter()
            .map(|segs| {
                let mut out = vec![];
                let mut cur = a;
                for &(s, e) in segs {
                    if s > cur {
                        out.push((cur, s));
                    }
                    cur = e;
                }
                if cur < b {
                    out.push((cur, b));
                }
                out
            })
            .collect();
        Region { grid: self.grid, rays }
    }

    pub fn is_empty(&self) -> bool {
        self.rays.iter().all(|r| r.is_empty())
    }

    /// Quadrature nodes, ray by ray.
    pub fn nodes(&self) -> Vec<AreaNode> {
        let gl = gauss_legendre(self.grid.n_r);
        let dth = TAU / self.grid.n_theta as f64;
        let mut out = Vec::new();
        for (i, segs) in self.rays.iter().enumerate() {
            let e = C64::from_polar(1.0, self.grid.theta(i));
            for &(s, t) in segs {
                let h = 0.5 * (t - s);
                let m = 0.5 * (t + s);
                for &(x, w) in gl.iter() {
                    let r = m + h * x;
                    out.push(AreaNode {
                        z: e * r,
                        weight: w * h * r * dth,
                    });
                }
            }
        }
        out
    }

    /// Is `z` covered by a segment of the nearest ray? Node-centre indicator.
    pub fn contains(&self, z: C64) -> bool {
        let n = self.grid.n_theta as f64;
        let i = ((z.arg().rem_euclid(TAU)) / TAU * n).round() as usize % self.grid.n_theta;
        let r = z.norm();
        self.rays[i].iter().any(|&(a, b)| r >= a && r <= b)
    }

    /// Is every segment of `self` inside a segment of `other` (same grid)?
    pub fn is_subset_of(&self, other: &Region) -> bool {
        let slack = 1e-12;
        self.rays.iter().zip(&other.rays).all(|(mine, theirs)| {
            mine.iter()
                .all(|&(a, b)| theirs.iter().any(|&(c, d)| a >= c - slack && b <= d + slack))
        })
    }

    /// Bounding data of the region: (min radius, max radius, centre of the
    /// bounding box, max distance from that centre).
    pub fn extent(&self) -> (f64, f64, C64, f64) {
        let mut rmin = f64::INFINITY;
        let mut rmax: f64 = 0.0;
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        let mut pts = vec![];
        for (i, segs) in self.rays.iter().enumerate() {
            let e = C64::from_polar(1.0, self.grid.theta(i));
            for &(a, b) in segs {
                rmin = rmin.min(a);
                rmax = rmax.max(b);
                for z in [e * a, e * b] {
                    x0 = x0.min(z.re);
                    x1 = x1.max(z.re);
                    y0 = y0.min(z.im);
                    y1 = y1.max(z.im);
                    pts.push(z);
                }
            }
        }
        let c = C64::new(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let rad = pts.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
        (rmin, rmax, c, rad)
    }
}

/// Turn ray samples into segments where `f < 0`, refining sign changes.
fn segments_from_samples(rs: &[f64], vals: &[f64], f: &dyn Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let inside = |v: f64| v < 0.0;
    let mut segs = vec![];
    let mut start = if inside(vals[0]) { Some(rs[0]) } else { None };
    for k in 0..rs.len() - 1 {
        let (i0, i1) = (inside(vals[k]), inside(vals[k + 1]));
        if i0 != i1 {
            let root = bisect(f, rs[k], rs[k + 1], i0);
            if i0 {
                segs.push((start.take().unwrap(), root));
            } else {
                start = Some(root);
            }
        }
    }
    if let Some(s) = start {
        segs.push((s, *rs.last().unwrap()));
    }
    segs.retain(|&(a, b)| b > a);
    segs
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, lo_inside: bool) -> f64 {
    while hi - lo > tol::ROOT_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == lo_inside {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `Σ f(node)·weight` in a fixed order.
pub fn integrate_area(nodes: &[AreaNode], f: impl Fn(C64) -> f64 + Sync + Send) -> f64 {
    crate::par::sum(nodes, |n| f(n.z) * n.weight)
}

/// Sum of pre-sampled values against node weights.
pub fn integrate_samples(nodes: &[AreaNode], samples: &[f64]) -> Result<f64> {
    if nodes.len() != samples.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples for {} nodes",
            samples.len(),
            nodes.len()
        )));
    }
    let idx: Vec<usize> = (0..nodes.len()).collect();
    Ok(crate::par::sum(&idx, |&i| samples[i] * nodes[i].weight))
}
