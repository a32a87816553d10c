use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{holomorphic_exponent, Blaschke, Domain, Green, HolomorphicExponent};
use crate::minimizers::Jets;
use crate::poly::RootPoly;
use crate::tol;
use crate::weights::{PhiSpec, PsiSpec};
use crate::C64;

/// Computable parts of the equality characterisation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityCertificate {
    /// `φ + 2ψ − 2Σ(kⱼ+1)G(·,zⱼ)` is harmonic.
    pub divisor: bool,
    /// ψ has poles exactly at the constrained points.
    pub psi_poles: bool,
    /// Character condition; always true on the disk.
    pub character: bool,
    pub character_defect: f64,
    /// Ratio constancy; `None` off the disk.
    pub ratio: Option<bool>,
    /// Per-point ratio limits `c₀ⱼ`.
    pub c0: Vec<C64>,
    pub verdict: bool,
}

fn near(a: C64, b: C64) -> bool {
    (a - b).norm() < tol::COINCIDENT
}

/// Statement (1): the divisor of `φ + 2ψ` inside the domain is `Σ 2(kⱼ+1)[zⱼ]`.
fn divisor_matches(domain: Domain, phi: &PhiSpec, psi: &PsiSpec, jets: &Jets) -> bool {
    let mut support: Vec<C64> = phi.green_part.iter().filter(|g| g.1 > 0.0).map(|g| g.0).collect();
    support.extend(psi.points());
    support.extend(phi.interior_zeros(domain));
    support.extend(jets.points());
    support.iter().all(|&w| {
        let v = 2.0 * phi.green_weight_at(w) + 2.0 * psi.weight_at(w) + 2.0 * phi.zero_part.order_at(w) as f64;
        let need = jets
            .points
            .iter()
            .find(|p| near(p.z, w))
            .map_or(0.0, |p| 2.0 * (p.k() as f64 + 1.0));
        (v - need).abs() <= 1e-12
    })
}

fn psi_poles_match(psi: &PsiSpec, jets: &Jets) -> bool {
    psi.poles.iter().all(|p| jets.points.iter().any(|j| near(j.z, p.z)))
        && jets.points.iter().all(|j| psi.weight_at(j.z) > 0.0)
}

/// Distance of `x` to the nearest multiple of 2π.
pub fn distance_to_lattice(x: f64) -> f64 {
    (x - TAU * (x / TAU).round()).abs()
}

/// `[Σ(kⱼ+1)·2πω(zⱼ) + period(u)] mod 2π` with `u = (φ+2ψ)/2 − Σ(kⱼ+1)G(·,zⱼ)`.
///
/// On the annulus this reduces to `Σ(qᵢ+pᵢ)·2πω(zᵢ) + period(u_h)`: zeros of
/// `g` contribute whole periods only.
pub fn character_defect(green: &Green, phi: &PhiSpec, psi: &PsiSpec) -> f64 {
    if green.domain == Domain::Disk {
        return 0.0;
    }
    let mut x = 0.0;
    for &(z, q) in &phi.green_part {
        x += q * TAU * green.harmonic_measure_inner(z);
    }
    for p in &psi.poles {
        x += p.p * TAU * green.harmonic_measure_inner(p.z);
    }
    if let Some(u) = &phi.harmonic {
        x += u.inner_period();
    }
    distance_to_lattice(x)
}

/// `f_u` for `u = (φ+2ψ)/2 − Σ(kⱼ+1)G(·,zⱼ)` on the disk, valid when the
/// divisor statement holds: `e^{F}·lead·Π_{|ζ|<1}(1 − ζ̄z)·Π_{|ζ|>1}(z − ζ)`.
#[derive(Clone, Debug)]
pub(crate) struct DiskUnit {
    exponent: Option<HolomorphicExponent>,
    zeros: RootPoly,
}

impl DiskUnit {
    pub(crate) fn new(phi: &PhiSpec) -> Result<Self> {
        let exponent = match &phi.harmonic {
            Some(u) => Some(holomorphic_exponent(u)?),
            None => None,
        };
        Ok(DiskUnit {
            exponent,
            zeros: phi.zero_part.clone(),
        })
    }

    pub(crate) fn eval(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        let mut v = self.exponent.as_ref().map_or(one, |f| f.eval(z)) * self.zeros.lead;
        for r in &self.zeros.roots {
            v *= if r.norm() < 1.0 { one - r.conj() * z } else { z - r };
        }
        v
    }
}

/// `Lⱼ = lim P(z)/(z−zⱼ)^{kⱼ}` for `P = f_u Π B_i^{k_i+1} Σ p_i B_i′/B_i`.
pub(crate) fn ratio_limits(phi: &PhiSpec, psi: &PsiSpec, jets: &Jets) -> Result<Vec<C64>> {
    let fu = DiskUnit::new(phi)?;
    let bl: Vec<Blaschke> = jets.points.iter().map(|p| Blaschke::new(p.z)).collect::<Result<_>>()?;
    Ok(jets
        .points
        .iter()
        .enumerate()
        .map(|(j, pj)| {
            let mut v = fu.eval(pj.z) * psi.weight_at(pj.z) / (1.0 - pj.z.norm_sqr()).powi(pj.k() as i32 + 1);
            for (i, pi) in jets.points.iter().enumerate() {
                if i != j {
                    v *= bl[i].eval(pj.z).powu(pi.k() as u32 + 1);
                }
            }
            v
        })
        .collect())
}

pub fn equality_certificate(
    green: &Green,
    phi: &PhiSpec,
    psi: &PsiSpec,
    jets: &Jets,
    check_ratio: bool,
) -> Result<EqualityCertificate> {
    let domain = green.domain;
    if check_ratio && domain != Domain::Disk {
        return Err(Error::StatementFourDiskOnly);
    }
    phi.validate(domain)?;
    psi.validate(green)?;
    jets.validate(domain)?;
    let divisor = divisor_matches(domain, phi, psi, jets);
    let psi_poles = psi_poles_match(psi, jets);
    let defect = character_defect(green, phi, psi);
    let character = defect <= 1e-6;
    let (ratio, c0) = if domain == Domain::Disk && divisor {
        let lims = ratio_limits(phi, psi, jets)?;
        let lower_zero = jets
            .points
            .iter()
            .all(|p| p.taylor[..p.k()].iter().all(|a| a.norm() == 0.0) && p.taylor[p.k()].norm() > 0.0);
        if lower_zero {
            let c0: Vec<C64> = lims
                .iter()
                .zip(&jets.points)
                .map(|(l, p)| l / p.taylor[p.k()])
                .collect();
            let ok = c0.iter().all(|c| (c - c0[0]).norm() <= 1e-6 * c0[0].norm());
            (Some(ok), c0)
        } else {
            (Some(false), vec![])
        }
    } else if domain == Domain::Disk {
        (Some(false), vec![])
    } else {
        (None, vec![])
    };
    let verdict = divisor && psi_poles && character && ratio.unwrap_or(true);
    Ok(EqualityCertificate {
        divisor,
        psi_poles,
        character,
        character_defect: defect,
        ratio,
        c0,
        verdict,
    })
}
