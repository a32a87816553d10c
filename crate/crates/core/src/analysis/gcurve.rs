use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Green;
use crate::minimizers::{bergman_min, Jets, Settings};
use crate::weights::{Gain, PhiSpec, PsiSpec};

/// Sampled `G(t)` with `r = h(t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GCurve {
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub g: Vec<f64>,
    pub converged: Vec<bool>,
    pub degree: Vec<usize>,
}

impl GCurve {
    /// Build from precomputed values.
    pub fn from_values(gain: &Gain, t: Vec<f64>, g: Vec<f64>) -> Self {
        let r = t.iter().map(|&x| gain.tail(x)).collect();
        let n = t.len();
        GCurve {
            t,
            r,
            g,
            converged: vec![true; n],
            degree: vec![0; n],
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        GCurve {
            g: self.g.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }
}

/// `G(t)` at every point of `t_grid`; points are solved concurrently.
#[allow(clippy::too_many_arguments)]
pub fn g_curve(
    green: &Green,
    phi: &PhiSpec,
    psi: &PsiSpec,
    gain: &Gain,
    jets: &Jets,
    t_grid: &[f64],
    settings: &Settings,
) -> Result<GCurve> {
    let results = crate::par::map(t_grid, |&t| bergman_min(green, phi, psi, gain, jets, t, settings));
    let mut curve = GCurve {
        t: t_grid.to_vec(),
        r: t_grid.iter().map(|&t| gain.tail(t)).collect(),
        g: vec![],
        converged: vec![],
        degree: vec![],
    };
    for r in results {
        let m = r?;
        curve.g.push(m.value);
        curve.converged.push(m.converged);
        curve.degree.push(m.basis.degree);
    }
    Ok(curve)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcavityReport {
    pub concave: bool,
    pub linear: bool,
    /// Largest `chord − G` over interior nodes; `≤ 0` for concave data.
    pub max_second_difference: f64,
    pub max_abs_second_difference: f64,
    /// Nodes where `G` lies strictly above the chord by more than `eps_conc`.
    pub strict_nodes: usize,
    pub monotone: bool,
    /// `G(t_max)/G(t_min)`.
    pub tail_ratio: f64,
    pub second_differences: Vec<f64>,
}

/// Second differences of `G` against `r`, with the limit point `(0, 0)`
/// appended. A node's second difference is the chord through its neighbours
/// minus the node value. Both tolerances are relative to `max |G|`.
pub fn concavity_report(curve: &GCurve, eps_conc: f64, eps_lin: f64) -> Result<ConcavityReport> {
    let n = curve.t.len();
    if n < 5 || curve.g.len() != n || curve.r.len() != n {
        return Err(Error::Grid("need at least 5 matching samples".into()));
    }
    if curve.t.windows(2).any(|w| !(w[1] > w[0])) || curve.r.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Grid("r must be strictly decreasing in t".into()));
    }
    let mut pts: Vec<(f64, f64)> = curve.r.iter().copied().zip(curve.g.iter().copied()).collect();
    pts.push((0.0, 0.0));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut d = vec![];
    for i in 1..pts.len() - 1 {
        let (r0, g0) = pts[i - 1];
        let (r1, g1) = pts[i];
        let (r2, g2) = pts[i + 1];
        let chord = (g0 * (r2 - r1) + g2 * (r1 - r0)) / (r2 - r0);
        d.push(chord - g1);
    }
    let scale = curve.g.iter().map(|g| g.abs()).fold(0.0, f64::max);
    let (eps_conc, eps_lin) = (eps_conc * scale, eps_lin * scale);
    let max_d = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_abs = d.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let strict_nodes = d.iter().filter(|&&x| x < -eps_conc).count();
    let monotone = curve.g.windows(2).all(|w| w[1] <= w[0] + eps_conc);
    Ok(ConcavityReport {
        concave: max_d <= eps_conc && monotone,
        linear: max_abs <= eps_lin,
        max_second_difference: max_d,
        max_abs_second_difference: max_abs,
        strict_nodes,
        monotone,
        tail_ratio: curve.g[n - 1] / curve.g[0],
        second_differences: d,
    })
}
