use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Green;
use crate::minimizers::{bergman_min, hardy_min, Jets, Settings};
use crate::tol;
use crate::weights::{Gain, PhiSpec, PsiSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equality,
    Strict,
    Violated,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Verdict {
    /// Classify `lhs ≤ bound` at relative tolerance `rel`.
    pub fn classify(lhs: f64, bound: f64, rel: f64) -> Verdict {
        let gap = bound - lhs;
        let scale = bound.abs().max(f64::MIN_POSITIVE);
        if gap.abs() <= rel * scale {
            Verdict::Equality
        } else if gap > 0.0 {
            Verdict::Strict
        } else {
            Verdict::Violated
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Equality => "equality",
            Verdict::Strict => "strict",
            Verdict::Violated => "violated",
            Verdict::NotApplicable => "n/a",
        }
    }
}

/// Paired minimal integrals with the bound they are compared against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    /// Boundary (Hardy) minimum.
    pub m_h: f64,
    /// Interior minimum (Bergman, or the face-norm minimum for Shilov relations).
    pub m: f64,
    /// Shilov minimum when relevant.
    pub m_s: Option<f64>,
    pub integral: f64,
    pub bound: f64,
    pub gap: f64,
    pub verdict: Verdict,
    pub converged: bool,
    pub linear: Option<bool>,
}

/// `M_H ≤ M / (π ∫c e^{−t})`.
pub fn theorem1_relation(
    green: &Green,
    phi: &PhiSpec,
    psi: &PsiSpec,
    gain: &Gain,
    jets: &Jets,
    settings: &Settings,
) -> Result<RelationReport> {
    let integral = gain.validate()?.integral;
    let m = bergman_min(green, phi, psi, gain, jets, 0.0, settings)?;
    if !m.value.is_finite() {
        return Err(Error::InvalidInput("interior minimum is not finite".into()));
    }
    let mh = hardy_min(green, phi, psi, jets, settings)?;
    let bound = m.value / (PI * integral);
    Ok(RelationReport {
        m_h: mh.value,
        m: m.value,
        m_s: None,
        integral,
        bound,
        gap: bound - mh.value,
        verdict: Verdict::classify(mh.value, bound, tol::EQUALITY_REL),
        converged: m.converged && mh.converged,
        linear: None,
    })
}
