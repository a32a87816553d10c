use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::certificate::{equality_certificate, DiskUnit};
use crate::error::{Error, Result};
use crate::geometry::{Blaschke, Domain, Green};
use crate::minimizers::{bergman_min, hardy_min, Jets, Settings};
use crate::quadrature::{integrate_area, integrate_boundary, Region};
use crate::weights::{Gain, PhiSpec, PsiSpec, WeightPair};
use crate::C64;

/// `F₀ = (1/c₀)·f_u·Πⱼ Bⱼ^{kⱼ+1}·Σⱼ pⱼ Bⱼ′/Bⱼ`, evaluated without the poles of `Bⱼ′/Bⱼ`.
#[derive(Clone, Debug)]
pub struct ExtremalDisk {
    pub c0: C64,
    unit: DiskUnit,
    factors: Vec<(Blaschke, usize, f64)>,
}

impl ExtremalDisk {
    pub fn eval(&self, z: C64) -> C64 {
        let b: Vec<C64> = self.factors.iter().map(|f| f.0.eval(z)).collect();
        let mut s = C64::new(0.0, 0.0);
        for (i, (bi, ki, pi)) in self.factors.iter().enumerate() {
            let mut term = bi.derivative(z) * b[i].powu(*ki as u32) * *pi;
            for (l, (_, kl, _)) in self.factors.iter().enumerate() {
                if l != i {
                    term *= b[l].powu(*kl as u32 + 1);
                }
            }
            s += term;
        }
        self.unit.eval(z) * s / self.c0
    }

    /// Taylor coefficients at `z` up to `order` from a 64-point Cauchy integral
    /// on the circle of radius `(1 − |z|)/2`.
    pub fn taylor(&self, z: C64, order: usize) -> Vec<C64> {
        let rad = 0.5 * (1.0 - z.norm());
        let n = 64;
        let vals: Vec<(C64, C64)> = (0..n)
            .map(|i| {
                let e = C64::from_polar(1.0, TAU * i as f64 / n as f64);
                (e, self.eval(z + e * rad))
            })
            .collect();
        (0..=order)
            .map(|l| {
                let s: C64 = vals.iter().map(|(e, f)| f * e.powi(-(l as i32))).sum();
                s / (n as f64 * rad.powi(l as i32))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalReport {
    pub c0: C64,
    /// Max deviation of F₀'s Taylor coefficients from the prescribed jets.
    pub jet_residual: f64,
    pub area_norm: f64,
    pub bergman: f64,
    pub boundary_norm: f64,
    pub hardy: f64,
}

impl ExtremalReport {
    pub fn area_rel_error(&self) -> f64 {
        (self.area_norm - self.bergman).abs() / self.bergman
    }

    pub fn boundary_rel_error(&self) -> f64 {
        (self.boundary_norm - self.hardy).abs() / self.hardy
    }
}

/// Closed-form extremal function on the disk, checked against both minima.
pub fn extremal_disk(
    phi: &PhiSpec,
    psi: &PsiSpec,
    gain: &Gain,
    jets: &Jets,
    settings: &Settings,
) -> Result<(ExtremalDisk, ExtremalReport)> {
    let green = Green::new(Domain::Disk);
    let cert = equality_certificate(&green, phi, psi, jets, true)?;
    if !cert.verdict {
        return Err(Error::NoExtremalFormula(format!(
            "divisor={} poles={} ratio={:?}",
            cert.divisor, cert.psi_poles, cert.ratio
        )));
    }
    let factors = jets
        .points
        .iter()
        .map(|p| Ok((Blaschke::new(p.z)?, p.k(), psi.weight_at(p.z))))
        .collect::<Result<Vec<_>>>()?;
    let f0 = ExtremalDisk {
        c0: cert.c0[0],
        unit: DiskUnit::new(phi)?,
        factors,
    };

    let mut jet_residual: f64 = 0.0;
    for p in &jets.points {
        let t = f0.taylor(p.z, p.taylor.len() - 1);
        for (a, b) in t.iter().zip(&p.taylor) {
            jet_residual = jet_residual.max((a - b).norm());
        }
    }

    let pair = WeightPair {
        green: &green,
        phi,
        psi,
        gain,
    };
    let area_norm = shell_integral(&f0, &pair, settings, None);
    let boundary_norm = integrate_boundary(
        &settings.boundary_grid(Domain::Disk),
        |n| f0.eval(n.z).norm_sqr(),
        |n| pair.rho_boundary(n.component, n.theta),
    );
    let bergman = bergman_min(&green, phi, psi, gain, jets, 0.0, settings)?.value;
    let hardy = hardy_min(&green, phi, psi, jets, settings)?.value;
    let report = ExtremalReport {
        c0: f0.c0,
        jet_residual,
        area_norm,
        bergman,
        boundary_norm,
        hardy,
    };
    Ok((f0, report))
}

/// `∫ |F₀|² ρ̃` over the disk, or over the shell `{2ψ ≥ log r}`.
fn shell_integral(f0: &ExtremalDisk, pair: &WeightPair, settings: &Settings, r: Option<f64>) -> f64 {
    let grid = settings.area_grid(Domain::Disk);
    let region = match r {
        None => Region::full(grid),
        Some(r) => Region::sublevel(grid, |z| pair.psi.eval(pair.green, z), -r.ln()).complement(),
    };
    integrate_area(&region.nodes(), |z| f0.eval(z).norm_sqr() * pair.rho_tilde(z))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShellLimitReport {
    pub r: Vec<f64>,
    pub ratios: Vec<f64>,
    pub extrapolated: f64,
}

/// `(1/π)∫_{2ψ≥log r}|F₀|²ρ̃ / ∫₀^{−log r} c e^{−t}` at each `r`, extrapolated
/// to `r → 1` by Richardson steps in `1 − r` (assumes the `r` values step by a
/// constant factor in `1 − r`).
pub fn shell_limit(
    f0: &ExtremalDisk,
    phi: &PhiSpec,
    psi: &PsiSpec,
    gain: &Gain,
    rs: &[f64],
    settings: &Settings,
) -> Result<ShellLimitReport> {
    if rs.len() < 2 || rs.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::InvalidInput(
            "shell radii must lie in (0,1), at least two".into(),
        ));
    }
    let green = Green::new(Domain::Disk);
    let pair = WeightPair {
        green: &green,
        phi,
        psi,
        gain,
    };
    let total = gain.integral();
    let ratios: Vec<f64> = rs
        .iter()
        .map(|&r| {
            let num = shell_integral(f0, &pair, settings, Some(r));
            num / (PI * (total - gain.tail(-r.ln())))
        })
        .collect();
    let h: Vec<f64> = rs.iter().map(|r| 1.0 - r).collect();
    let mut level = ratios.clone();
    let mut order = 1;
    while level.len() > 1 {
        level = (0..level.len() - 1)
            .map(|i| {
                let f = (h[i] / h[i + 1]).powi(order);
                (f * level[i + 1] - level[i]) / (f - 1.0)
            })
            .collect();
        order += 1;
    }
    Ok(ShellLimitReport {
        r: rs.to_vec(),
        ratios,
        extrapolated: level[0],
    })
}
