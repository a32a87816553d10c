use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::basis::{Basis, BasisKind};
use super::gram::assemble_gram;
use super::jets::Jets;
use super::solve::{least_norm_solve, quadratic_form};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Green};
use crate::poly::RootPoly;
use crate::quadrature::{AreaGrid, BoundaryGrid, BoundaryNode, Region};
use crate::tol;
use crate::weights::{lelong_check, Gain, PhiSpec, PsiSpec, WeightPair};
use crate::C64;

/// Discretisation controls shared by all minimal problems.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    /// Basis degrees tried in order.
    pub schedule: Vec<usize>,
    /// Radial Gauss nodes per segment; raised to `N_max + 8` if smaller.
    pub n_r: usize,
    /// Rays; raised to `2N_max + 64` if smaller.
    pub n_theta: usize,
    /// Boundary nodes per circle; raised to `4N_max + 64` if smaller.
    pub n_boundary: usize,
    pub ray_samples: usize,
    /// Stop when `|Δvalue| ≤ rel_tol · value`.
    pub rel_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            schedule: vec![16, 32, 64, 128],
            n_r: 0,
            n_theta: 0,
            n_boundary: 0,
            ray_samples: 256,
            rel_tol: tol::SCHEDULE_REL,
        }
    }
}

impl Settings {
    pub fn max_degree(&self) -> usize {
        self.schedule.iter().copied().max().unwrap_or(16)
    }

    pub fn area_grid(&self, domain: Domain) -> AreaGrid {
        let n = self.max_degree();
        let mut g = AreaGrid::new(domain, self.n_r.max(n + 8), self.n_theta.max(2 * n + 64));
        g.ray_samples = self.ray_samples;
        g
    }

    pub fn boundary_grid(&self, domain: Domain) -> BoundaryGrid {
        BoundaryGrid::new(domain, self.n_boundary.max(4 * self.max_degree() + 64))
    }

    /// Scale all resolutions by `factor`.
    pub fn refined(&self, factor: f64) -> Settings {
        let n = self.max_degree();
        let up = |x: usize| (x as f64 * factor).round() as usize;
        Settings {
            n_r: up(self.n_r.max(n + 8)),
            n_theta: up(self.n_theta.max(2 * n + 64)),
            n_boundary: up(self.n_boundary.max(4 * n + 64)),
            ray_samples: up(self.ray_samples),
            ..self.clone()
        }
    }
}

/// Converged constrained minimum.
#[derive(Clone, Debug)]
pub struct MinResult {
    pub value: f64,
    pub coefficients: Vec<C64>,
    pub basis: Basis,
    pub converged: bool,
    pub residual: f64,
    /// `(degree, value)` for each completed schedule step.
    pub history: Vec<(usize, f64)>,
    pub gram: DMatrix<C64>,
    pub rows: DMatrix<C64>,
    pub rhs: DVector<C64>,
}

impl MinResult {
    pub fn eval(&self, z: C64) -> C64 {
        self.basis.eval(&self.coefficients, z)
    }

    /// Squared norm of another coefficient vector in the same basis.
    pub fn norm_of(&self, coeffs: &[C64]) -> f64 {
        quadratic_form(&self.gram, &DVector::from_column_slice(coeffs))
    }

    /// `‖A c − b‖` for a candidate coefficient vector.
    pub fn constraint_residual(&self, coeffs: &[C64]) -> f64 {
        (&self.rows * DVector::from_column_slice(coeffs) - &self.rhs).norm()
    }
}

/// `|⟨F̂ − F, F⟩| / ‖F‖²` for a feasible alternative `F̂`.
pub fn orthogonality_residual(min: &MinResult, alternative: &[C64]) -> Result<f64> {
    let scale = 1.0 + min.rhs.norm();
    let res = min.constraint_residual(alternative);
    if res > 1e-8 * scale {
        return Err(Error::ConstraintResidual(res));
    }
    let c = DVector::from_column_slice(&min.coefficients);
    let d = DVector::from_column_slice(alternative) - &c;
    let ip = c.dotc(&(&min.gram * d));
    Ok(ip.norm() / min.value)
}

/// Jet rows and right-hand side. Orders below the prefactor's vanishing order
/// hold automatically; a nonzero target there is infeasible.
pub(crate) fn constraint_system(basis: &Basis, jets: &Jets) -> Result<(DMatrix<C64>, DVector<C64>)> {
    let mut rows = vec![];
    let mut rhs = vec![];
    for p in &jets.points {
        let forced = basis.prefactor.order_at(p.z);
        for (l, row) in basis.taylor_rows(p.z, p.k()).into_iter().enumerate() {
            if l < forced {
                if p.taylor[l].norm() != 0.0 {
                    return Err(Error::InfeasibleConstraints);
                }
                continue;
            }
            rows.push(row);
            rhs.push(p.taylor[l]);
        }
    }
    let a = DMatrix::from_fn(rows.len(), basis.len(), |i, j| rows[i][j]);
    Ok((a, DVector::from_vec(rhs)))
}

/// Run the degree schedule; `build(N)` returns a basis and its Gram matrix.
pub(crate) fn run_schedule(
    settings: &Settings,
    jets: &Jets,
    mut build: impl FnMut(usize) -> Result<(Basis, DMatrix<C64>)>,
) -> Result<MinResult> {
    let mut best: Option<MinResult> = None;
    let mut history = vec![];
    for &n in &settings.schedule {
        let (basis, gram) = match build(n) {
            Ok(x) => x,
            Err(Error::DegenerateBasis(_)) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        let (a, b) = constraint_system(&basis, jets)?;
        let sol = match least_norm_solve(&gram, &a, &b, n) {
            Ok(s) => s,
            Err(Error::DegenerateBasis(_)) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        history.push((n, sol.value));
        let converged = best
            .as_ref()
            .is_some_and(|p| (p.value - sol.value).abs() <= settings.rel_tol * sol.value.abs());
        best = Some(MinResult {
            value: sol.value,
            coefficients: sol.coeffs.iter().copied().collect(),
            basis,
            converged,
            residual: sol.residual,
            history: history.clone(),
            gram,
            rows: a,
            rhs: b,
        });
        if converged {
            break;
        }
    }
    best.ok_or_else(|| Error::InvalidInput("empty degree schedule".into()))
}

/// Basis chart adapted to a region.
pub(crate) fn chart_for(domain: Domain, region: &Region) -> BasisKind {
    let (rmin, rmax, c, rad) = region.extent();
    match domain {
        Domain::Disk => {
            if rmax >= 1.0 - 1e-12 && rmin <= 1e-12 {
                BasisKind::Monomial {
                    center: C64::new(0.0, 0.0),
                    radius: 1.0,
                }
            } else {
                BasisKind::Monomial {
                    center: c,
                    radius: rad.max(1e-300),
                }
            }
        }
        Domain::Annulus { .. } => BasisKind::Laurent {
            r_out: rmax,
            r_in: rmin,
        },
    }
}

pub(crate) fn boundary_chart(domain: Domain) -> BasisKind {
    match domain {
        Domain::Disk => BasisKind::Monomial {
            center: C64::new(0.0, 0.0),
            radius: 1.0,
        },
        Domain::Annulus { q } => BasisKind::Laurent { r_out: 1.0, r_in: q },
    }
}

/// Minimum of `∫_region |f|² weight dA` over `f = V·(basis)` under jets.
pub fn area_min(
    domain: Domain,
    region: &Region,
    weight: &(dyn Fn(C64) -> f64 + Sync),
    prefactor: &RootPoly,
    jets: &Jets,
    settings: &Settings,
) -> Result<MinResult> {
    jets.validate(domain)?;
    if region.is_empty() {
        return Err(Error::ResolutionTooCoarse(
            "sublevel region has no quadrature segments".into(),
        ));
    }
    let nodes = region.nodes();
    let pts: Vec<(C64, f64)> = crate::par::map(&nodes, |n| (n.z, n.weight * weight(n.z)));
    let kind = chart_for(domain, region);
    run_schedule(settings, jets, |n| {
        let basis = Basis::new(kind, n).with_prefactor(prefactor.clone());
        let g = assemble_gram(&basis, &pts)?;
        Ok((basis, g))
    })
}

/// Minimum of `(1/2π)∮ |f|² ρ |dz|` under jets.
pub fn boundary_min(
    domain: Domain,
    rho: &(dyn Fn(&BoundaryNode) -> f64 + Sync),
    jets: &Jets,
    settings: &Settings,
) -> Result<MinResult> {
    jets.validate(domain)?;
    let nodes = settings.boundary_grid(domain).nodes();
    let pts: Vec<(C64, f64)> = crate::par::map(&nodes, |n| (n.z, n.weight * rho(n) / std::f64::consts::TAU));
    if pts.iter().any(|p| !(p.1 > 0.0)) {
        return Err(Error::WeightSingularity);
    }
    let kind = boundary_chart(domain);
    run_schedule(settings, jets, |n| {
        let basis = Basis::new(kind, n);
        let g = assemble_gram(&basis, &pts)?;
        Ok((basis, g))
    })
}

/// `G(t)`: minimum of `∫_{2ψ<−t} |f|² e^{−φ}c(−2ψ)` under jets.
#[allow(clippy::too_many_arguments)]
pub fn bergman_min(
    green: &Green,
    phi: &PhiSpec,
    psi: &PsiSpec,
    gain: &Gain,
    jets: &Jets,
    t: f64,
    settings: &Settings,
) -> Result<MinResult> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Range(format!("t = {t} must be finite and ≥ 0")));
    }
    let domain = green.domain;
    phi.validate(domain)?;
    psi.validate(green)?;
    gain.validate()?;
    lelong_check(phi, psi, jets)?;
    let pair = WeightPair { green, phi, psi, gain };
    let region = Region::sublevel(settings.area_grid(domain), |z| psi.eval(green, z), t);
    area_min(
        domain,
        &region,
        &|z| pair.rho_tilde_reduced(z),
        &phi.divisor_poly(domain),
        jets,
        settings,
    )
}

/// `M_H`: minimum of `(1/2π)∮ |f|² ρ |dz|` with `ρ = e^{−φ}(∂ψ/∂v)⁻¹`.
pub fn hardy_min(green: &Green, phi: &PhiSpec, psi: &PsiSpec, jets: &Jets, settings: &Settings) -> Result<MinResult> {
    phi.validate(green.domain)?;
    psi.validate(green)?;
    let gain = Gain::Constant1;
    let pair = WeightPair {
        green,
        phi,
        psi,
        gain: &gain,
    };
    boundary_min(
        green.domain,
        &|n: &BoundaryNode| pair.rho_boundary(n.component, n.theta),
        jets,
        settings,
    )
}

/// Bergman kernel on the diagonal, `1/min{∫|f|² : f(z) = 1}`.
pub fn kernel_bergman(domain: Domain, z: C64, settings: &Settings) -> Result<f64> {
    let region = Region::full(settings.area_grid(domain));
    let m = area_min(
        domain,
        &region,
        &|_| 1.0,
        &RootPoly::one(),
        &Jets::value(z, C64::new(1.0, 0.0)),
        settings,
    )?;
    Ok(1.0 / m.value)
}

/// Conjugate Hardy kernel on the diagonal, weight `(∂G(·,z)/∂v)⁻¹`.
pub fn kernel_conjugate_hardy(domain: Domain, z: C64, settings: &Settings) -> Result<f64> {
    let green = Green::new(domain);
    let psi = PsiSpec::single(z, 1.0);
    let m = hardy_min(
        &green,
        &PhiSpec::zero(),
        &psi,
        &Jets::value(z, C64::new(1.0, 0.0)),
        settings,
    )?;
    Ok(1.0 / m.value)
}
