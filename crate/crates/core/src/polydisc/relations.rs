use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::domain::{ideal_staircase, multi_indices, Constraint, Factor, IdealSpec, ProductDomain};
use super::problems::{area_grams, bergman_min_product, face_grams, hardy_dm_min, shilov_grams, shilov_min, validate};
use super::solve::{dense_schedule, dense_solve, run_product_schedule, ProductMin};
use super::tensor::kron_mat;
use crate::analysis::{concavity_report, equality_certificate, GCurve, RelationReport, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Green};
use crate::minimizers::{area_min, boundary_min, Basis, JetPoint, Jets, MinResult, Settings};
use crate::quadrature::{BoundaryNode, Region};
use crate::tol;
use crate::weights::{Gain, PhiSpec, Pole, PsiSpec};
use crate::C64;

/// Both sides of one splitting identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitSide {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

impl SplitSide {
    fn new(lhs: f64, rhs: f64) -> Self {
        SplitSide {
            lhs,
            rhs,
            defect: (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE),
        }
    }
}

/// `M_S = M_{∂D₁}·M_{S₁}`, `M_{∂D₁×M₁} = M_{∂D₁}·M_{M₁}` and `M_M = M_{D₁}·M_{M₁}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitReport {
    pub shilov: SplitSide,
    pub face: SplitSide,
    pub bergman: SplitSide,
    pub converged: bool,
}

fn factor_jets(f: &Factor, h: &[C64]) -> Jets {
    Jets::new(
        f.points()
            .into_iter()
            .zip(h)
            .map(|(z, &a)| JetPoint { z, taylor: vec![a] })
            .collect(),
    )
}

fn boundary_factor_min(f: &Factor, h: &[C64], settings: &Settings) -> Result<MinResult> {
    boundary_min(
        f.domain(),
        &|n: &BoundaryNode| f.boundary_weight(n.component, n.theta, false),
        &factor_jets(f, h),
        settings,
    )
}

fn area_factor_min(f: &Factor, h: &[C64], settings: &Settings) -> Result<MinResult> {
    let region = Region::full(settings.area_grid(f.domain()));
    area_min(
        f.domain(),
        &region,
        &|z| (-f.phi.reduced(&f.green, z)).exp(),
        &f.phi.divisor_poly(f.domain()),
        &factor_jets(f, h),
        settings,
    )
}

/// Minimum against an explicit Kronecker product of factor Gram matrices.
fn dense_product_min(
    m: &ProductDomain,
    ideal: &IdealSpec,
    settings: &Settings,
    grams: impl Fn(usize) -> Result<Vec<(Basis, DMatrix<C64>)>>,
) -> Result<ProductMin> {
    let cons = ideal.constraints(m)?;
    run_product_schedule(&dense_schedule(settings), settings.rel_tol, |n| {
        let parts = grams(n)?;
        let refs: Vec<&DMatrix<C64>> = parts.iter().map(|p| &p.1).collect();
        let g = kron_mat(&refs);
        let bases: Vec<Basis> = parts.into_iter().map(|p| p.0).collect();
        let sol = dense_solve(&bases, &g, &cons, m, n)?;
        Ok((bases, sol))
    })
}

/// Both sides of the three splitting identities. The product side is an
/// explicit tensor Gram solve; the split side multiplies one-variable minima.
pub fn product_split_check(m: &ProductDomain, ideal: &IdealSpec, settings: &Settings) -> Result<SplitReport> {
    let IdealSpec::ProductValues(h) = ideal else {
        return Err(Error::SplittingRequiresProductData(
            "h₀ must be given as a product Πⱼhⱼ".into(),
        ));
    };
    if m.dim() < 2 {
        return Err(Error::SplittingRequiresProductData("need at least two factors".into()));
    }
    validate(m)?;
    ideal.constraints(m)?;
    let dense = Settings {
        schedule: dense_schedule(settings),
        ..settings.clone()
    };
    let ms = dense_product_min(m, ideal, &dense, |n| shilov_grams(m, &dense, n))?;
    let mf = dense_product_min(m, ideal, &dense, |n| face_grams(m, 0, &dense, n))?;
    let mb = dense_product_min(m, ideal, &dense, |n| area_grams(m, &dense, n))?;

    let mut conv = ms.converged && mf.converged && mb.converged;
    let mut bdry = vec![];
    let mut area = vec![];
    for (f, hj) in m.factors.iter().zip(h) {
        let b = boundary_factor_min(f, hj, settings)?;
        let a = area_factor_min(f, hj, settings)?;
        conv &= b.converged && a.converged;
        bdry.push(b.value);
        area.push(a.value);
    }
    let rest: f64 = area[1..].iter().product();
    Ok(SplitReport {
        shilov: SplitSide::new(ms.value, bdry.iter().product()),
        face: SplitSide::new(mf.value, bdry[0] * rest),
        bergman: SplitSide::new(mb.value, area[0] * rest),
        converged: conv,
    })
}

/// `M_H ≤ M/(π∫c e^{−t})` on the product; `linear` reports whether the
/// product `G`-curve sampled on `t_grid` is linear in `r`.
pub fn theorem21_relation(
    m: &ProductDomain,
    gain: &Gain,
    ideal: &IdealSpec,
    t_grid: &[f64],
    settings: &Settings,
) -> Result<RelationReport> {
    let integral = gain.validate()?.integral;
    let mm = bergman_min_product(m, gain, ideal, 0.0, settings)?;
    if !mm.value.is_finite() {
        return Err(Error::InvalidInput("interior minimum is not finite".into()));
    }
    let mh = hardy_dm_min(m, ideal, settings)?;
    let bound = mm.value / (PI * integral);
    let mut converged = mm.converged && mh.converged;
    let linear = if t_grid.len() >= 5 {
        let mut g = vec![];
        for &t in t_grid {
            let r = bergman_min_product(m, gain, ideal, t, settings)?;
            converged &= r.converged;
            g.push(r.value);
        }
        let curve = GCurve::from_values(gain, t_grid.to_vec(), g);
        Some(concavity_report(&curve, tol::EQUALITY_REL, tol::EQUALITY_REL)?.linear)
    } else {
        None
    };
    Ok(RelationReport {
        m_h: mh.value,
        m: mm.value,
        m_s: None,
        integral,
        bound,
        gap: bound - mh.value,
        verdict: Verdict::classify(mh.value, bound, tol::EQUALITY_REL),
        converged,
        linear,
    })
}

/// Weight convention for the `∂M` and Shilov norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `ψⱼ = Σ 2G(·, z_{j,k})`, weights `(Σ2∂G/∂v)⁻¹`.
    PaperP2,
    /// `ψⱼ = Σ G(·, z_{j,k})`.
    P1,
}

impl Normalization {
    pub fn pole_weight(&self) -> f64 {
        match self {
            Normalization::PaperP2 => 2.0,
            Normalization::P1 => 1.0,
        }
    }
}

/// One factor of a Shilov scenario: points `Zⱼ`, weight `φⱼ`, values `hⱼ`.
#[derive(Clone, Debug)]
pub struct ShilovFactor {
    pub domain: Domain,
    pub points: Vec<C64>,
    pub phi: PhiSpec,
    pub h: Vec<C64>,
}

/// Equality conditions checked factor by factor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorStatements {
    /// `φⱼ = 2uⱼ` with `uⱼ` harmonic.
    pub harmonic_weight: bool,
    pub character: bool,
    pub character_defect: f64,
    /// Ratio constancy; `None` off the disk.
    pub ratio: Option<bool>,
    pub c0: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem31Report {
    pub normalization: Normalization,
    /// `m_s` is `M_S`; `m` and `m_h` are both `M_H`.
    pub relation: RelationReport,
    pub statements: Vec<FactorStatements>,
}

impl Theorem31Report {
    pub fn statements_hold(&self) -> bool {
        self.statements
            .iter()
            .all(|s| s.harmonic_weight && s.character && s.ratio.unwrap_or(true))
    }
}

/// Build the product with `p_{j,k}` set by the normalization.
pub fn shilov_product(factors: &[ShilovFactor], normalization: Normalization) -> Result<(ProductDomain, IdealSpec)> {
    let p = normalization.pole_weight();
    let mut fs = vec![];
    let mut h = vec![];
    for f in factors {
        if f.points.len() != f.h.len() {
            return Err(Error::InvalidInput("points and values differ in length".into()));
        }
        let psi = PsiSpec::new(f.points.iter().map(|&z| Pole { z, p }).collect());
        fs.push(Factor::new(f.domain, psi, f.phi.clone())?);
        h.push(f.h.clone());
    }
    Ok((ProductDomain::new(fs)?, IdealSpec::ProductValues(h)))
}

/// `M_S ≤ M_H/(nπ^{n−1})` with the per-factor equality statements.
pub fn theorem31_relation(
    factors: &[ShilovFactor],
    normalization: Normalization,
    settings: &Settings,
) -> Result<Theorem31Report> {
    let (m, ideal) = shilov_product(factors, normalization)?;
    let ms = shilov_min(&m, &ideal, settings)?;
    let mh = hardy_dm_min(&m, &ideal, settings)?;
    let n = m.dim() as f64;
    let integral = n * PI.powf(n - 1.0);
    let bound = mh.value / integral;
    let mut statements = vec![];
    for f in factors {
        let green = Green::new(f.domain);
        let psi = PsiSpec::new(f.points.iter().map(|&z| Pole { z, p: 1.0 }).collect());
        let jets = Jets::new(
            f.points
                .iter()
                .zip(&f.h)
                .map(|(&z, &a)| JetPoint { z, taylor: vec![a] })
                .collect(),
        );
        let cert = equality_certificate(&green, &f.phi, &psi, &jets, f.domain == Domain::Disk)?;
        statements.push(FactorStatements {
            harmonic_weight: cert.divisor,
            character: cert.character,
            character_defect: cert.character_defect,
            ratio: cert.ratio,
            c0: cert.c0,
        });
    }
    Ok(Theorem31Report {
        normalization,
        relation: RelationReport {
            m_h: mh.value,
            m: mh.value,
            m_s: Some(ms.value),
            integral,
            bound,
            gap: bound - ms.value,
            verdict: Verdict::classify(ms.value, bound, tol::EQUALITY_REL),
            converged: ms.converged && mh.converged,
            linear: None,
        },
        statements,
    })
}

/// Extension bound on the product for germs supported on `E_β`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductExtensionReport {
    pub m_h: f64,
    /// `c_{j,k}` per factor and pole.
    pub c: Vec<Vec<f64>>,
    /// Contribution of each germ entry to the printed right-hand side.
    pub terms: Vec<f64>,
    pub rhs_printed: f64,
    pub rhs_derived: f64,
    pub printed: Verdict,
    pub derived: Verdict,
    pub converged: bool,
}

/// `c_{j,k} = exp lim (Σ_{k₁}p_{j,k₁}G(z,z_{j,k₁})/p_{j,k} − log|z−z_{j,k}|)`.
pub fn pole_constants(f: &Factor) -> Result<Vec<f64>> {
    let poles = &f.psi.poles;
    poles
        .iter()
        .enumerate()
        .map(|(k, pk)| {
            let mut s = f.green.capacity(pk.z)?.ln();
            for (k1, p1) in poles.iter().enumerate() {
                if k1 != k {
                    s += p1.p * f.green.value(pk.z, p1.z)? / pk.p;
                }
            }
            Ok(s.exp())
        })
        .collect()
}

/// `M_H` against `Σ|d_{β,α}|²2ⁿπ^{n−1}e^{−φ(z_β)}/Πⱼ((αⱼ+1)c_{j,βⱼ}^{2αⱼ+2})`
/// and the same sum divided by `2ⁿ`.
pub fn cor21_bound(m: &ProductDomain, germ: &[Constraint], settings: &Settings) -> Result<ProductExtensionReport> {
    validate(m)?;
    if germ.is_empty() {
        return Err(Error::InvalidInput("empty germ".into()));
    }
    let c: Vec<Vec<f64>> = m.factors.iter().map(pole_constants).collect::<Result<_>>()?;
    let n = m.dim() as i32;
    let mut terms = vec![];
    for g in germ {
        let sets = ideal_staircase(&m.p_at(&g.beta))?;
        if !sets.boundary.contains(&g.alpha) {
            return Err(Error::InvalidInput(format!(
                "exponent {:?} is not in E_β at {:?}",
                g.alpha, g.beta
            )));
        }
        let z = m.point(&g.beta);
        let mut den = 1.0;
        for (j, (&b, &a)) in g.beta.iter().zip(&g.alpha).enumerate() {
            den *= (a as f64 + 1.0) * c[j][b].powi(2 * a as i32 + 2);
        }
        terms.push(g.value.norm_sqr() * 2f64.powi(n) * PI.powi(n - 1) * (-m.phi(&z)).exp() / den);
    }
    let rhs_printed: f64 = terms.iter().sum();
    if !(rhs_printed > 0.0 && rhs_printed.is_finite()) {
        return Err(Error::Range("bound sum must lie in (0, ∞)".into()));
    }
    let rhs_derived = rhs_printed / 2f64.powi(n);
    let mh = hardy_dm_min(m, &IdealSpec::Staircase(germ.to_vec()), settings)?;
    Ok(ProductExtensionReport {
        m_h: mh.value,
        c,
        terms,
        rhs_printed,
        rhs_derived,
        printed: Verdict::classify(mh.value, rhs_printed, tol::EQUALITY_REL),
        derived: Verdict::classify(mh.value, rhs_derived, tol::EQUALITY_REL),
        converged: mh.converged,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformProductReport {
    /// `max M_H/Σ|a|²` over the random trials.
    pub c_hat: f64,
    /// `|value(2a) − 4·value(a)| / value(a)`, worst case over trials.
    pub homogeneity_defect: f64,
    pub trials: usize,
}

/// Multi-indices with `Σαⱼ ≤ k`.
pub fn jet_exponents(n: usize, k: u32) -> Vec<Vec<u32>> {
    multi_indices(&vec![k as usize + 1; n])
        .into_iter()
        .map(|v| v.into_iter().map(|x| x as u32).collect::<Vec<u32>>())
        .filter(|a| a.iter().sum::<u32>() <= k)
        .collect()
}

/// Random derivative tables `∂^α f(z_β) = a_{β,α}` over `L_k` at every grid point.
pub fn uniform_jet_extension_product(
    m: &ProductDomain,
    k: u32,
    trials: usize,
    seed: u64,
    settings: &Settings,
) -> Result<UniformProductReport> {
    if trials < 10 {
        return Err(Error::InvalidInput("at least 10 trials required".into()));
    }
    let slots: Vec<(Vec<usize>, Vec<u32>)> = m
        .grid()
        .into_iter()
        .flat_map(|b| jet_exponents(m.dim(), k).into_iter().map(move |a| (b.clone(), a)))
        .collect();
    let table = |a: &[C64]| -> IdealSpec {
        IdealSpec::Jets(
            slots
                .iter()
                .zip(a)
                .map(|((beta, alpha), &v)| {
                    let fact: f64 = alpha.iter().map(|&x| (1..=x).product::<u32>() as f64).product();
                    Constraint {
                        beta: beta.clone(),
                        alpha: alpha.clone(),
                        value: v / fact,
                    }
                })
                .collect(),
        )
    };
    let probe = hardy_dm_min(m, &table(&vec![C64::new(1.0, 0.0); slots.len()]), settings)?;
    let fixed = Settings {
        schedule: vec![probe.degree],
        ..settings.clone()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_hat: f64 = 0.0;
    let mut homogeneity_defect: f64 = 0.0;
    for _ in 0..trials {
        let a: Vec<C64> = (0..slots.len())
            .map(|_| crate::analysis::random_normal(&mut rng))
            .collect();
        let norm: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        let v1 = hardy_dm_min(m, &table(&a), &fixed)?.value;
        let doubled: Vec<C64> = a.iter().map(|x| x * 2.0).collect();
        let v2 = hardy_dm_min(m, &table(&doubled), &fixed)?.value;
        if !v1.is_finite() {
            return Err(Error::Range("extension minimum is not finite".into()));
        }
        c_hat = c_hat.max(v1 / norm);
        homogeneity_defect = homogeneity_defect.max((v2 - 4.0 * v1).abs() / v1);
    }
    Ok(UniformProductReport {
        c_hat,
        homogeneity_defect,
        trials,
    })
}
