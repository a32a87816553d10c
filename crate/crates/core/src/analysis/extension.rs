use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::relation::Verdict;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Green, HarmonicExtension};
use crate::minimizers::{boundary_min, hardy_min, least_norm_solve, JetPoint, Jets, Settings};
use crate::quadrature::BoundaryNode;
use crate::tol;
use crate::weights::{PhiSpec, Pole, PsiSpec};
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionBoundReport {
    pub m_h: f64,
    pub t: Vec<f64>,
    pub capacity: Vec<f64>,
    pub lambda: Vec<f64>,
    pub rhs_derived: f64,
    pub rhs_printed: f64,
    /// `αⱼ = −log(λ(zⱼ)tⱼ)` for the `(1,0)`-form variant.
    pub alpha: Vec<f64>,
    pub derived: Verdict,
    pub printed: Verdict,
    pub converged: bool,
}

impl ExtensionBoundReport {
    /// `M_H ≤ min(candidates)·(1 + 1e−6)`.
    pub fn holds(&self) -> bool {
        self.m_h <= self.rhs_derived.min(self.rhs_printed) * (1.0 + tol::EQUALITY_REL)
    }
}

/// `tⱼ = exp(−2 Σ_{i≠j} (kᵢ+1) G(zⱼ, zᵢ))`.
pub fn interaction_factors(green: &Green, points: &[C64], k: &[usize]) -> Result<Vec<f64>> {
    let w: Vec<f64> = k.iter().map(|&k| k as f64 + 1.0).collect();
    green.interaction(points, &w)
}

/// Extension with prescribed top jets `f^{(kⱼ)}(zⱼ) = kⱼ!aⱼ` (lower jets zero)
/// and boundary weight `λ(∂ψ/∂v)⁻¹`, `ψ = Σ(kⱼ+1)G(·,zⱼ)`; `log λ` is the
/// harmonic extension given.
pub fn extension_bound(
    domain: Domain,
    points: &[C64],
    k: &[usize],
    a: &[C64],
    log_lambda: &HarmonicExtension,
    settings: &Settings,
) -> Result<ExtensionBoundReport> {
    if points.len() != k.len() || points.len() != a.len() || points.is_empty() {
        return Err(Error::InvalidInput(
            "points, k and a must have equal nonzero length".into(),
        ));
    }
    if log_lambda.domain != domain {
        return Err(Error::GridMismatch("λ is defined on a different domain".into()));
    }
    let green = Green::new(domain);
    let t = interaction_factors(&green, points, k)?;
    let capacity = points.iter().map(|&z| green.capacity(z)).collect::<Result<Vec<_>>>()?;
    let lambda: Vec<f64> = points.iter().map(|&z| log_lambda.eval(z).exp()).collect();
    let mut rhs_derived = 0.0;
    for j in 0..points.len() {
        let kk = k[j] as f64 + 1.0;
        rhs_derived += a[j].norm_sqr() * t[j] * lambda[j] / (kk * capacity[j].powf(2.0 * kk));
    }
    if !(rhs_derived > 0.0 && rhs_derived.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "bound {rhs_derived} is not finite and positive"
        )));
    }
    let rhs_printed = 2.0 * rhs_derived;
    let alpha = lambda.iter().zip(&t).map(|(l, t)| -(l * t).ln()).collect();

    let psi = PsiSpec::new(
        points
            .iter()
            .zip(k)
            .map(|(&z, &k)| Pole { z, p: k as f64 + 1.0 })
            .collect(),
    );
    let mut half = log_lambda.clone();
    half.scale(-0.5);
    let phi = PhiSpec::with_harmonic(half);
    let jets = Jets::new(
        points
            .iter()
            .zip(k)
            .zip(a)
            .map(|((&z, &k), &a)| {
                let mut taylor = vec![C64::new(0.0, 0.0); k + 1];
                taylor[k] = a;
                JetPoint { z, taylor }
            })
            .collect(),
    );
    let m = hardy_min(&green, &phi, &psi, &jets, settings)?;
    Ok(ExtensionBoundReport {
        m_h: m.value,
        t,
        capacity,
        lambda,
        rhs_derived,
        rhs_printed,
        alpha,
        derived: Verdict::classify(m.value, rhs_derived, tol::EQUALITY_REL),
        printed: Verdict::classify(m.value, rhs_printed, tol::EQUALITY_REL),
        converged: m.converged,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformExtensionReport {
    /// `max value/Σ|a|²` over the random trials.
    pub c_hat: f64,
    /// Largest eigenvalue of the value form: the best constant.
    pub c_sup: f64,
    /// `|value(2a) − 4·value(a)| / value(a)`, worst case over trials.
    pub homogeneity_defect: f64,
    pub trials: usize,
}

/// Constant for unweighted boundary extension of arbitrary jets of order `kⱼ`.
pub fn uniform_jet_extension(
    domain: Domain,
    points: &[C64],
    k: &[usize],
    trials: usize,
    seed: u64,
    settings: &Settings,
) -> Result<UniformExtensionReport> {
    if trials < 10 {
        return Err(Error::InvalidInput("at least 10 trials required".into()));
    }
    if points.len() != k.len() || points.is_empty() {
        return Err(Error::InvalidInput(
            "points and k must have equal nonzero length".into(),
        ));
    }
    let template = Jets::new(
        points
            .iter()
            .zip(k)
            .map(|(&z, &k)| JetPoint {
                z,
                taylor: vec![C64::new(1.0, 0.0); k + 1],
            })
            .collect(),
    );
    let one = |_: &BoundaryNode| 1.0;
    // Fix the basis at the degree the schedule settles on for the all-ones table.
    let probe = boundary_min(domain, &one, &template, settings)?;
    let fixed = Settings {
        schedule: vec![probe.basis.degree],
        ..settings.clone()
    };
    let gram = &probe.gram;
    let rows = &probe.rows;
    let n = template.n_rows();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_hat: f64 = 0.0;
    let mut homogeneity_defect: f64 = 0.0;
    for _ in 0..trials {
        let b = DVector::from_fn(n, |_, _| random_normal(&mut rng));
        let v1 = least_norm_solve(gram, rows, &b, fixed.max_degree())?.value;
        let v2 = least_norm_solve(gram, rows, &(&b * C64::new(2.0, 0.0)), fixed.max_degree())?.value;
        c_hat = c_hat.max(v1 / b.norm_squared());
        homogeneity_defect = homogeneity_defect.max((v2 - 4.0 * v1).abs() / v1);
    }

    // value(a) = a* P a with P = Cᴴ G C, C the minimisers of the unit tables.
    let cols: Vec<DVector<C64>> = (0..n)
        .map(|i| {
            let mut e = DVector::zeros(n);
            e[i] = C64::new(1.0, 0.0);
            least_norm_solve(gram, rows, &e, fixed.max_degree()).map(|s| s.coeffs)
        })
        .collect::<Result<_>>()?;
    let c = DMatrix::from_columns(&cols);
    let p = c.adjoint() * gram * &c;
    let p = (&p + p.adjoint()) * C64::new(0.5, 0.0);
    let c_sup = p
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(UniformExtensionReport {
        c_hat,
        c_sup,
        homogeneity_defect,
        trials,
    })
}

pub(crate) fn random_normal(rng: &mut ChaCha8Rng) -> C64 {
    use rand::RngExt;
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    C64::from_polar((-2.0 * u1.ln()).sqrt(), std::f64::consts::TAU * u2)
}
