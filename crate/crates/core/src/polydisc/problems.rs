use std::f64::consts::TAU;

use nalgebra::DMatrix;

use super::domain::{Factor, IdealSpec, ProductDomain};
use super::solve::{
    dense_schedule, dense_solve, kron_solve, pair_transform, run_product_schedule, whiten, Diag, FactorSystem,
    ProductMin,
};
use super::tensor::{kron_mat, mode_apply};
use crate::error::{Error, Result};
use crate::minimizers::{assemble_gram, boundary_chart, chart_for, Basis, BasisKind, Settings};
use crate::quadrature::{gauss_legendre_on, Region};
use crate::weights::Gain;
use crate::C64;

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Range(format!("t = {t} must be finite and ≥ 0")));
    }
    Ok(())
}

fn sublevel(f: &Factor, t: f64, settings: &Settings) -> Region {
    Region::sublevel(settings.area_grid(f.domain()), |z| f.psi_at(z), t)
}

/// Area nodes of `region` weighted by `|V|²e^{−φⱼ}`.
fn area_points(f: &Factor, region: &Region) -> Result<Vec<(C64, f64)>> {
    if region.is_empty() {
        return Err(Error::ResolutionTooCoarse(
            "sublevel region has no quadrature segments".into(),
        ));
    }
    let nodes = region.nodes();
    Ok(crate::par::map(&nodes, |n| {
        (n.z, n.weight * (-f.phi.reduced(&f.green, n.z)).exp())
    }))
}

/// Boundary nodes weighted by `(1/2π)(Σp∂G/∂v)⁻¹e^{−φⱼ}`, reduced by `|V|²` if asked.
fn boundary_points(f: &Factor, settings: &Settings, reduced: bool) -> Result<Vec<(C64, f64)>> {
    let nodes = settings.boundary_grid(f.domain()).nodes();
    let pts: Vec<(C64, f64)> = crate::par::map(&nodes, |n| {
        (n.z, n.weight * f.boundary_weight(n.component, n.theta, reduced) / TAU)
    });
    if pts.iter().any(|p| !(p.1 > 0.0 && p.1.is_finite())) {
        return Err(Error::WeightSingularity);
    }
    Ok(pts)
}

fn area_basis(f: &Factor, kind: BasisKind, n: usize) -> Basis {
    Basis::new(kind, n).with_prefactor(f.phi.divisor_poly(f.domain()))
}

pub(crate) fn validate(m: &ProductDomain) -> Result<()> {
    for f in &m.factors {
        f.psi.validate(&f.green)?;
        f.phi.validate(f.domain())?;
    }
    Ok(())
}

/// Minimum of `∫_{2ψ<−t} |f|² c(−2ψ) Πⱼe^{−φⱼ}` over the tensor basis.
///
/// For `c ≡ 1` the weight is a product and each factor is whitened on its
/// own. Otherwise the layer-cake identity
/// `∫|f|²c(−2ψ) = c(t)∫_{2ψ<−t}|f|² + ∫_t^∞ c′(τ)∫_{2ψ<−τ}|f|² dτ`
/// writes the Gram matrix as a τ-integral of Kronecker products, one
/// sublevel set `Πⱼ{2ψⱼ<−τ}` per node.
pub fn bergman_min_product(
    m: &ProductDomain,
    gain: &Gain,
    ideal: &IdealSpec,
    t: f64,
    settings: &Settings,
) -> Result<ProductMin> {
    check_t(t)?;
    validate(m)?;
    gain.validate()?;
    let cons = ideal.constraints(m)?;
    if *gain == Gain::Constant1 {
        let regions: Vec<Region> = m.factors.iter().map(|f| sublevel(f, t, settings)).collect();
        let pts: Vec<Vec<(C64, f64)>> = m
            .factors
            .iter()
            .zip(&regions)
            .map(|(f, r)| area_points(f, r))
            .collect::<Result<_>>()?;
        return run_product_schedule(&settings.schedule, settings.rel_tol, |n| {
            let mut systems = vec![];
            for ((f, r), p) in m.factors.iter().zip(&regions).zip(&pts) {
                let basis = area_basis(f, chart_for(f.domain(), r), n);
                let a = assemble_gram(&basis, p)?;
                systems.push(FactorSystem {
                    t: whiten(&a, n)?,
                    lambda: vec![],
                    basis,
                });
            }
            let sol = kron_solve(&systems, Diag::Unit, &cons, m)?;
            Ok((systems.into_iter().map(|s| s.basis).collect(), sol))
        });
    }
    let schedule = dense_schedule(settings);
    let dense = Settings {
        schedule: schedule.clone(),
        ..settings.clone()
    };
    let outer: Vec<Region> = m.factors.iter().map(|f| sublevel(f, t, &dense)).collect();
    let mut layers: Vec<(f64, Vec<Region>)> = vec![(gain.c(t), outer.clone())];
    for (tau, w) in layer_nodes(gain, t) {
        let rs = m.factors.iter().map(|f| sublevel(f, tau, &dense)).collect();
        layers.push((w * gain.c_prime(tau), rs));
    }
    run_product_schedule(&schedule, settings.rel_tol, |n| {
        let bases: Vec<Basis> = m
            .factors
            .iter()
            .zip(&outer)
            .map(|(f, r)| area_basis(f, chart_for(f.domain(), r), n))
            .collect();
        let total: usize = bases.iter().map(|b| b.len()).product();
        let mut gram = DMatrix::<C64>::zeros(total, total);
        for (w, regions) in &layers {
            if regions.iter().any(|r| r.is_empty()) {
                continue;
            }
            let mut grams = vec![];
            for ((f, r), b) in m.factors.iter().zip(regions).zip(&bases) {
                grams.push(assemble_gram(b, &area_points(f, r)?)?);
            }
            let refs: Vec<&DMatrix<C64>> = grams.iter().collect();
            gram += kron_mat(&refs) * C64::new(*w, 0.0);
        }
        let sol = dense_solve(&bases, &gram, &cons, m, n)?;
        Ok((bases, sol))
    })
}

/// Quadrature for `∫_t^∞ (·) dτ` against `c′`. Exponential gains use
/// `u = e^{−(τ−t)}` on dyadic panels; tabulated gains use their segments.
fn layer_nodes(gain: &Gain, t: f64) -> Vec<(f64, f64)> {
    const PANELS: i32 = 24;
    const NODES: usize = 8;
    match gain {
        Gain::Constant1 => vec![],
        Gain::Exponential { .. } => {
            let mut out = vec![];
            for k in 0..PANELS {
                let (a, b) = (0.5f64.powi(k + 1), 0.5f64.powi(k));
                for (u, w) in gauss_legendre_on(NODES, a, b) {
                    out.push((t - u.ln(), w / u));
                }
            }
            out
        }
        Gain::Tabulated { t: ts, .. } => {
            let mut out = vec![];
            for seg in ts.windows(2) {
                let (a, b) = (seg[0].max(t), seg[1]);
                if b > a {
                    out.extend(gauss_legendre_on(NODES, a, b));
                }
            }
            out
        }
    }
}

fn face_systems(m: &ProductDomain, settings: &Settings, n: usize) -> Result<Vec<FactorSystem>> {
    m.factors
        .iter()
        .map(|f| {
            let region = Region::full(settings.area_grid(f.domain()));
            let basis = area_basis(f, chart_for(f.domain(), &region), n);
            let a = assemble_gram(&basis, &area_points(f, &region)?)?;
            let b = assemble_gram(&basis, &boundary_points(f, settings, true)?)?;
            let (t, lambda) = pair_transform(&a, &b, n)?;
            Ok(FactorSystem { basis, t, lambda })
        })
        .collect()
}

/// `M_H`: minimum of `Σⱼ (1/2π)∫_{Mⱼ}∫_{∂Dⱼ} |f|²ρ` with
/// `ρ = (Σₖp_{j,k}∂G/∂v)⁻¹ Πₗe^{−φₗ}` on the face `∂Dⱼ × Mⱼ`.
pub fn hardy_dm_min(m: &ProductDomain, ideal: &IdealSpec, settings: &Settings) -> Result<ProductMin> {
    validate(m)?;
    let cons = ideal.constraints(m)?;
    run_product_schedule(&settings.schedule, settings.rel_tol, |n| {
        let systems = face_systems(m, settings, n)?;
        let sol = kron_solve(&systems, Diag::FaceSum, &cons, m)?;
        Ok((systems.into_iter().map(|s| s.basis).collect(), sol))
    })
}

/// Minimum of the single face term `j` of the `∂M` norm. The factor `j`
/// carries only its boundary weight, so no vanishing is forced there.
pub fn hardy_face_min(m: &ProductDomain, j: usize, ideal: &IdealSpec, settings: &Settings) -> Result<ProductMin> {
    if j >= m.dim() {
        return Err(Error::InvalidInput(format!("face {j} out of range")));
    }
    validate(m)?;
    let cons = ideal.constraints(m)?;
    run_product_schedule(&settings.schedule, settings.rel_tol, |n| {
        let systems: Vec<FactorSystem> = face_grams(m, j, settings, n)?
            .into_iter()
            .map(|(basis, g)| {
                Ok(FactorSystem {
                    t: whiten(&g, n)?,
                    lambda: vec![],
                    basis,
                })
            })
            .collect::<Result<_>>()?;
        let sol = kron_solve(&systems, Diag::Unit, &cons, m)?;
        Ok((systems.into_iter().map(|s| s.basis).collect(), sol))
    })
}

/// Factor bases and Gram matrices of the face `∂Dⱼ × Mⱼ`.
pub(crate) fn face_grams(
    m: &ProductDomain,
    j: usize,
    settings: &Settings,
    n: usize,
) -> Result<Vec<(Basis, DMatrix<C64>)>> {
    m.factors
        .iter()
        .enumerate()
        .map(|(l, f)| {
            if l == j {
                let basis = Basis::new(boundary_chart(f.domain()), n);
                let g = assemble_gram(&basis, &boundary_points(f, settings, false)?)?;
                Ok((basis, g))
            } else {
                let region = Region::full(settings.area_grid(f.domain()));
                let basis = area_basis(f, chart_for(f.domain(), &region), n);
                let g = assemble_gram(&basis, &area_points(f, &region)?)?;
                Ok((basis, g))
            }
        })
        .collect()
}

/// Factor bases and Gram matrices of `Mⱼ`-type area norms over the whole factors.
pub(crate) fn area_grams(m: &ProductDomain, settings: &Settings, n: usize) -> Result<Vec<(Basis, DMatrix<C64>)>> {
    m.factors
        .iter()
        .map(|f| {
            let region = Region::full(settings.area_grid(f.domain()));
            let basis = area_basis(f, chart_for(f.domain(), &region), n);
            let g = assemble_gram(&basis, &area_points(f, &region)?)?;
            Ok((basis, g))
        })
        .collect()
}

/// Factor bases and boundary Gram matrices with the Shilov weights `λⱼ`.
pub(crate) fn shilov_grams(m: &ProductDomain, settings: &Settings, n: usize) -> Result<Vec<(Basis, DMatrix<C64>)>> {
    m.factors
        .iter()
        .map(|f| {
            let basis = Basis::new(boundary_chart(f.domain()), n);
            let g = assemble_gram(&basis, &boundary_points(f, settings, false)?)?;
            Ok((basis, g))
        })
        .collect()
}

/// `M_S`: minimum of `(2π)⁻ⁿ∫_S |f|²λ` with `λ = Πⱼ(Σₖp_{j,k}∂G/∂v)⁻¹e^{−φⱼ}`.
pub fn shilov_min(m: &ProductDomain, ideal: &IdealSpec, settings: &Settings) -> Result<ProductMin> {
    validate(m)?;
    let cons = ideal.constraints(m)?;
    run_product_schedule(&settings.schedule, settings.rel_tol, |n| {
        let systems: Vec<FactorSystem> = shilov_grams(m, settings, n)?
            .into_iter()
            .map(|(basis, g)| {
                Ok(FactorSystem {
                    t: whiten(&g, n)?,
                    lambda: vec![],
                    basis,
                })
            })
            .collect::<Result<_>>()?;
        let sol = kron_solve(&systems, Diag::Unit, &cons, m)?;
        Ok((systems.into_iter().map(|s| s.basis).collect(), sol))
    })
}

fn values_matrix(basis: &Basis, pts: &[(C64, f64)]) -> DMatrix<C64> {
    let mut out = DMatrix::<C64>::zeros(pts.len(), basis.len());
    let mut row = vec![C64::new(0.0, 0.0); basis.len()];
    for (k, (z, _)) in pts.iter().enumerate() {
        basis.values(*z, &mut row);
        for (j, v) in row.iter().enumerate() {
            out[(k, j)] = *v;
        }
    }
    out
}

fn check_face_basis(m: &ProductDomain, pm: &ProductMin) -> Result<()> {
    if pm.bases.len() != m.dim() {
        return Err(Error::InvalidInput(
            "minimiser dimension differs from the product".into(),
        ));
    }
    Ok(())
}

/// `‖f‖²_{∂M,ρ}` by direct quadrature on every face grid `∂Dⱼ × Mⱼ`.
pub fn face_norm_direct(m: &ProductDomain, pm: &ProductMin, settings: &Settings) -> Result<f64> {
    check_face_basis(m, pm)?;
    let n = m.dim();
    let mut area = vec![];
    let mut bdry = vec![];
    for f in &m.factors {
        let region = Region::full(settings.area_grid(f.domain()));
        let nodes = region.nodes();
        area.push(
            nodes
                .iter()
                .map(|p| (p.z, p.weight * (-f.phi.eval(&f.green, p.z)).exp()))
                .collect::<Vec<_>>(),
        );
        bdry.push(boundary_points(f, settings, false)?);
    }
    let mut total = 0.0;
    for j in 0..n {
        let grids: Vec<&Vec<(C64, f64)>> = (0..n).map(|l| if l == j { &bdry[l] } else { &area[l] }).collect();
        let mut vals = pm.coefficients.clone();
        let mut shape = pm.shape();
        for (l, g) in grids.iter().enumerate() {
            (vals, shape) = mode_apply(&vals, &shape, l, &values_matrix(&pm.bases[l], g));
        }
        let weights: Vec<Vec<f64>> = grids.iter().map(|g| g.iter().map(|p| p.1).collect()).collect();
        let mut idx = vec![0usize; n];
        for v in &vals {
            let w: f64 = idx.iter().zip(&weights).map(|(&i, w)| w[i]).product();
            total += v.norm_sqr() * w;
            for l in (0..n).rev() {
                idx[l] += 1;
                if idx[l] < shape[l] {
                    break;
                }
                idx[l] = 0;
            }
        }
    }
    Ok(total)
}

/// `Σⱼ c*(Bⱼ ⊗ ⊗_{l≠j}Aₗ)c` from the factor Gram matrices.
pub fn face_norm_gram(m: &ProductDomain, pm: &ProductMin, settings: &Settings) -> Result<f64> {
    check_face_basis(m, pm)?;
    let n = m.dim();
    let mut a = vec![];
    let mut b = vec![];
    for (f, basis) in m.factors.iter().zip(&pm.bases) {
        let region = Region::full(settings.area_grid(f.domain()));
        a.push(assemble_gram(basis, &area_points(f, &region)?)?);
        b.push(assemble_gram(basis, &boundary_points(f, settings, true)?)?);
    }
    let mut total = 0.0;
    for j in 0..n {
        let mut g = pm.coefficients.clone();
        let mut shape = pm.shape();
        for l in 0..n {
            let q = if l == j { &b[l] } else { &a[l] };
            (g, shape) = mode_apply(&g, &shape, l, q);
        }
        total += pm
            .coefficients
            .iter()
            .zip(&g)
            .map(|(c, x)| (c.conj() * x).re)
            .sum::<f64>();
    }
    Ok(total)
}

/// `∫_{2ψ<−t} |Σ b_α w^α|² Πⱼe^{−φⱼ}` as a product of per-factor sublevel
/// quadratures of monomial moments.
pub fn product_sublevel_integral(
    m: &ProductDomain,
    coeffs: &[(Vec<u32>, C64)],
    t: f64,
    settings: &Settings,
) -> Result<f64> {
    check_t(t)?;
    let n = m.dim();
    if coeffs.iter().any(|(a, _)| a.len() != n) {
        return Err(Error::InvalidInput("exponent length differs from the dimension".into()));
    }
    let mut moments = vec![];
    for (j, f) in m.factors.iter().enumerate() {
        let deg = coeffs.iter().map(|(a, _)| a[j] as usize).max().unwrap_or(0);
        let basis = Basis::new(
            BasisKind::Monomial {
                center: C64::new(0.0, 0.0),
                radius: 1.0,
            },
            deg,
        );
        let region = sublevel(f, t, settings);
        if region.is_empty() {
            return Ok(0.0);
        }
        let pts: Vec<(C64, f64)> = region
            .nodes()
            .iter()
            .map(|p| (p.z, p.weight * (-f.phi.eval(&f.green, p.z)).exp()))
            .collect();
        moments.push(assemble_gram(&basis, &pts)?);
    }
    let mut s = C64::new(0.0, 0.0);
    for (a, ca) in coeffs {
        for (b, cb) in coeffs {
            let p: C64 = (0..n).map(|j| moments[j][(a[j] as usize, b[j] as usize)]).product();
            s += ca.conj() * cb * p;
        }
    }
    Ok(s.re)
}
