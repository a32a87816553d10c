use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::area::{integrate_area, AreaGrid, Region};
use crate::error::{Error, Result};
use crate::geometry::Green;
use crate::tol;
use crate::weights::PsiSpec;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoareaReport {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
    pub shells: usize,
}

/// Compare `∫_{ψ ≥ log r} g dA` with `∫_{log r}^0 (∮_{ψ=s} g/|∇ψ| dl) ds`.
///
/// The level-curve integrals are taken along the rays of `grid`: where a ray
/// crosses `{ψ = s}` at radius `ρ`, it contributes `g·ρ/|∂ψ/∂r|·Δθ`. The outer
/// integral is a midpoint rule over `shells` bins in ψ-value.
pub fn coarea_check(
    green: &Green,
    psi: &PsiSpec,
    g: impl Fn(C64) -> f64 + Sync + Send,
    r: f64,
    grid: AreaGrid,
    shells: usize,
) -> Result<CoareaReport> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Range(format!("r = {r} outside (0, 1)")));
    }
    let shells = shells.max(1);
    let log_r = r.ln();
    let psi_f = |z: C64| psi.eval(green, z);
    let inner = Region::sublevel(grid, psi_f, -2.0 * log_r);
    let lhs = integrate_area(&inner.complement().nodes(), &g);

    let ds = -log_r / shells as f64;
    let levels: Vec<f64> = (0..shells).map(|k| log_r + (k as f64 + 0.5) * ds).collect();
    let (a, b) = (grid.domain.inner_radius(), 1.0);
    let s = grid.ray_samples.max(2);
    let dth = TAU / grid.n_theta as f64;
    let per_ray: Vec<Vec<f64>> = crate::par::map_range(grid.n_theta, |i| {
        let e = C64::from_polar(1.0, grid.theta(i));
        let rs: Vec<f64> = (0..=s).map(|k| a + (b - a) * k as f64 / s as f64).collect();
        let vals: Vec<f64> = rs.iter().map(|&x| psi_f(e * x)).collect();
        levels
            .iter()
            .map(|&lev| {
                let mut acc = 0.0;
                for k in 0..s {
                    let (v0, v1) = (vals[k] - lev, vals[k + 1] - lev);
                    if (v0 < 0.0) == (v1 < 0.0) {
                        continue;
                    }
                    let (mut lo, mut hi) = (rs[k], rs[k + 1]);
                    let lo_neg = v0 < 0.0;
                    while hi - lo > tol::ROOT_WIDTH {
                        let mid = 0.5 * (lo + hi);
                        if mid <= lo || mid >= hi {
                            break;
                        }
                        if (psi_f(e * mid) - lev < 0.0) == lo_neg {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    let rho = 0.5 * (lo + hi);
                    let z = e * rho;
                    let dr = (e * psi.gradient(green, z)).re.abs();
                    acc += g(z) * rho / dr;
                }
                acc * dth
            })
            .collect()
    });
    let mut rhs = 0.0;
    for k in 0..shells {
        let lk: f64 = per_ray.iter().map(|v| v[k]).sum();
        if lk == 0.0 {
            return Err(Error::ResolutionTooCoarse(format!("no level crossing in shell {k}")));
        }
        rhs += lk * ds;
    }
    Ok(CoareaReport {
        lhs,
        rhs,
        defect: (lhs - rhs).abs(),
        shells,
    })
}

/// Closed form `Σ_α e^{−Σⱼ(αⱼ+1)t/pⱼ} |b_α|² πⁿ / Πⱼ(αⱼ+1)` for
/// `∫_{2ψ<−t} |Σ b_α w^α|²` over the unit polydisc with `ψ = maxⱼ pⱼ log|wⱼ|`.
pub fn monomial_sublevel_integral(p: &[f64], coeffs: &[(Vec<u32>, C64)], t: f64) -> Result<f64> {
    let n = p.len();
    if p.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::InvalidInput("weights pⱼ must be positive".into()));
    }
    let mut total = 0.0;
    for (alpha, b) in coeffs {
        if alpha.len() != n {
            return Err(Error::InvalidInput("exponent length differs from dimension".into()));
        }
        let mut e = 0.0;
        let mut den = 1.0;
        for (a, pj) in alpha.iter().zip(p) {
            e += (*a as f64 + 1.0) / pj;
            den *= *a as f64 + 1.0;
        }
        total += (-e * t).exp() * b.norm_sqr() * PI.powi(n as i32) / den;
    }
    Ok(total)
}
