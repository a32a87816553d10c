use std::path::Path;

use minl2::geometry::{Component, Domain, HarmonicExtension};
use minl2::minimizers::{JetPoint, Jets, Settings};
use minl2::poly::RootPoly;
use minl2::polydisc::{Constraint, Factor, IdealSpec, Normalization, ProductDomain, ShilovFactor};
use minl2::weights::{Gain, PhiSpec, Pole, PsiSpec};
use minl2::C64;
use serde::Deserialize;

use crate::report::Expect;

/// Invalid configuration; reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub id: String,
    /// Operation run by `bank`, e.g. `"relation thm1"`.
    pub operation: Option<String>,
    pub domain: Option<Domain>,
    #[serde(default)]
    pub psi: Vec<Pole>,
    #[serde(default)]
    pub phi: PhiCfg,
    #[serde(default = "constant_gain")]
    pub gain: Gain,
    #[serde(default)]
    pub jets: Vec<JetCfg>,
    /// Evaluation points for `green` and `saitoh`.
    #[serde(default)]
    pub points: Vec<C64>,
    #[serde(default)]
    pub pairs: Vec<PairCfg>,
    #[serde(default)]
    pub t: f64,
    #[serde(default)]
    pub t_grid: Vec<f64>,
    /// Also build the closed-form extremal function (`relation thm1`, disk only).
    #[serde(default)]
    pub extremal: bool,
    /// `log λ` for `extend cor11`.
    pub log_lambda: Option<HarmonicCfg>,
    pub product: Option<ProductCfg>,
    #[serde(default)]
    pub settings: SettingsCfg,
    #[serde(default)]
    pub expect: Vec<Expect>,
}

fn constant_gain() -> Gain {
    Gain::Constant1
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiCfg {
    #[serde(default)]
    pub green: Vec<GreenPartCfg>,
    #[serde(default)]
    pub zeros: Vec<C64>,
    pub harmonic: Option<HarmonicCfg>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenPartCfg {
    pub z: C64,
    pub q: f64,
}

/// Boundary data `Σ (cos_k cos kθ + sin_k sin kθ)` per circle.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicCfg {
    #[serde(default)]
    pub outer: Vec<FourierTerm>,
    #[serde(default)]
    pub inner: Vec<FourierTerm>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    64
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTerm {
    pub k: u32,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetCfg {
    pub z: C64,
    pub taylor: Vec<C64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCfg {
    pub z: C64,
    pub w: C64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductCfg {
    pub factors: Vec<FactorCfg>,
    pub ideal: Option<IdealCfg>,
    pub normalization: Option<Normalization>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorCfg {
    pub domain: Domain,
    pub psi: Vec<Pole>,
    #[serde(default)]
    pub phi: PhiCfg,
    /// Values at the poles of ψ, for product data and Shilov relations.
    #[serde(default)]
    pub h: Vec<C64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IdealCfg {
    Maximal { values: Vec<C64> },
    ProductValues,
    Staircase { constraints: Vec<ConstraintCfg> },
    Jets { constraints: Vec<ConstraintCfg> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintCfg {
    #[serde(default)]
    pub beta: Option<Vec<usize>>,
    pub alpha: Vec<u32>,
    pub value: C64,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsCfg {
    pub schedule: Option<Vec<usize>>,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,
    pub n_boundary: Option<usize>,
    pub ray_samples: Option<usize>,
    pub rel_tol: Option<f64>,
}

/// Command-line overrides applied on top of a config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub resolution: Option<f64>,
    pub degree: Option<usize>,
    pub tolerance: Option<f64>,
    pub normalization: Option<Normalization>,
    pub smoke: bool,
}

/// Largest degree used in smoke mode.
pub const SMOKE_DEGREE: usize = 32;

pub fn load(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| bad(format!("{}: {}", path.display(), e.0)))
}

pub fn parse(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn require_in(domain: Domain, z: C64, what: &str) -> Result<(), ConfigError> {
    domain.require_interior(z).map_err(|e| bad(format!("{what} {z}: {e}")))
}

impl ScenarioConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        if self.id.is_empty()
            || !self
                .id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(bad(format!("id {:?} must be non-empty [A-Za-z0-9_-]", self.id)));
        }
        if let Some(d) = self.domain {
            d.validate().map_err(|e| bad(format!("domain: {e}")))?;
            for p in &self.psi {
                require_in(d, p.z, "psi pole")?;
            }
            for j in &self.jets {
                require_in(d, j.z, "jet point")?;
            }
            for z in &self.points {
                require_in(d, *z, "point")?;
            }
            for p in &self.pairs {
                require_in(d, p.z, "pair point")?;
                require_in(d, p.w, "pair point")?;
            }
            for g in &self.phi.green {
                require_in(d, g.z, "phi green pole")?;
            }
        }
        if let Some(p) = &self.product {
            if p.factors.is_empty() {
                return Err(bad("product needs at least one factor"));
            }
            for (i, f) in p.factors.iter().enumerate() {
                f.domain
                    .validate()
                    .map_err(|e| bad(format!("factor {i} domain: {e}")))?;
                for q in &f.psi {
                    require_in(f.domain, q.z, &format!("factor {i} psi pole"))?;
                }
                for g in &f.phi.green {
                    require_in(f.domain, g.z, &format!("factor {i} phi green pole"))?;
                }
            }
        }
        let s = &self.settings;
        if let Some(sched) = &s.schedule {
            if sched.is_empty() || sched.contains(&0) {
                return Err(bad("settings.schedule must be a non-empty list of positive degrees"));
            }
        }
        if let Some(t) = s.rel_tol {
            if !(t > 0.0) {
                return Err(bad("settings.rel_tol must be > 0"));
            }
        }
        if !(self.t >= 0.0 && self.t.is_finite()) || self.t_grid.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(bad("t and t_grid entries must be finite and ≥ 0"));
        }
        for e in &self.expect {
            e.validate().map_err(bad)?;
        }
        Ok(())
    }

    pub fn settings(&self, o: &Overrides) -> Result<Settings, ConfigError> {
        let d = Settings::default();
        let s = &self.settings;
        let mut out = Settings {
            schedule: s.schedule.clone().unwrap_or(d.schedule),
            n_r: s.n_r.unwrap_or(d.n_r),
            n_theta: s.n_theta.unwrap_or(d.n_theta),
            n_boundary: s.n_boundary.unwrap_or(d.n_boundary),
            ray_samples: s.ray_samples.unwrap_or(d.ray_samples),
            rel_tol: s.rel_tol.unwrap_or(d.rel_tol),
        };
        let cap = match (o.degree, o.smoke) {
            (Some(n), true) => Some(n.min(SMOKE_DEGREE)),
            (Some(n), false) => Some(n),
            (None, true) => Some(SMOKE_DEGREE),
            (None, false) => None,
        };
        if let Some(n) = cap {
            if n == 0 {
                return Err(bad("--degree must be positive"));
            }
            out.schedule.retain(|&k| k <= n);
            if out.schedule.is_empty() {
                out.schedule.push(n);
            }
        }
        if let Some(t) = o.tolerance {
            if !(t > 0.0) {
                return Err(bad("--tolerance must be > 0"));
            }
            out.rel_tol = t;
        }
        if let Some(f) = o.resolution {
            if !(f > 0.0 && f.is_finite()) {
                return Err(bad("--resolution must be > 0"));
            }
            out = out.refined(f);
        }
        Ok(out)
    }

    pub fn domain(&self) -> Result<Domain, ConfigError> {
        self.domain.ok_or_else(|| bad("this operation needs [domain]"))
    }

    pub fn psi(&self) -> Result<PsiSpec, ConfigError> {
        if self.psi.is_empty() {
            return Err(bad("this operation needs at least one [[psi]] pole"));
        }
        Ok(PsiSpec::new(self.psi.clone()))
    }

    pub fn phi(&self) -> Result<PhiSpec, ConfigError> {
        self.phi.build(self.domain()?)
    }

    pub fn jets(&self) -> Result<Jets, ConfigError> {
        if self.jets.is_empty() {
            return Err(bad("this operation needs at least one [[jets]] entry"));
        }
        if self.jets.iter().any(|j| j.taylor.is_empty()) {
            return Err(bad("jets.taylor must not be empty"));
        }
        Ok(Jets::new(
            self.jets
                .iter()
                .map(|j| JetPoint {
                    z: j.z,
                    taylor: j.taylor.clone(),
                })
                .collect(),
        ))
    }

    pub fn product(&self) -> Result<&ProductCfg, ConfigError> {
        self.product
            .as_ref()
            .ok_or_else(|| bad("this operation needs [product]"))
    }

    pub fn product_domain(&self) -> Result<ProductDomain, ConfigError> {
        let p = self.product()?;
        let factors = p
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                Factor::new(f.domain, PsiSpec::new(f.psi.clone()), f.phi.build(f.domain)?)
                    .map_err(|e| bad(format!("factor {i}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ProductDomain::new(factors).map_err(|e| bad(e.to_string()))
    }

    pub fn ideal(&self) -> Result<IdealSpec, ConfigError> {
        let p = self.product()?;
        let n = p.factors.len();
        let cons = |cs: &[ConstraintCfg]| -> Result<Vec<Constraint>, ConfigError> {
            cs.iter()
                .map(|c| {
                    let beta = c.beta.clone().unwrap_or_else(|| vec![0; n]);
                    if beta.len() != n || c.alpha.len() != n {
                        return Err(bad(format!("constraint needs {n} entries in beta and alpha")));
                    }
                    Ok(Constraint {
                        beta,
                        alpha: c.alpha.clone(),
                        value: c.value,
                    })
                })
                .collect()
        };
        match p
            .ideal
            .as_ref()
            .ok_or_else(|| bad("this operation needs [product.ideal]"))?
        {
            IdealCfg::Maximal { values } => Ok(IdealSpec::Maximal(values.clone())),
            IdealCfg::ProductValues => {
                for (i, f) in p.factors.iter().enumerate() {
                    if f.h.len() != f.psi.len() {
                        return Err(bad(format!("factor {i}: h needs one value per pole")));
                    }
                }
                Ok(IdealSpec::ProductValues(
                    p.factors.iter().map(|f| f.h.clone()).collect(),
                ))
            }
            IdealCfg::Staircase { constraints } => Ok(IdealSpec::Staircase(cons(constraints)?)),
            IdealCfg::Jets { constraints } => Ok(IdealSpec::Jets(cons(constraints)?)),
        }
    }

    pub fn germ(&self) -> Result<Vec<Constraint>, ConfigError> {
        match self.ideal()? {
            IdealSpec::Staircase(c) | IdealSpec::Jets(c) => Ok(c),
            _ => Err(bad("extend cor21 needs a staircase or jets ideal")),
        }
    }

    pub fn shilov_factors(&self) -> Result<Vec<ShilovFactor>, ConfigError> {
        self.product()?
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                if f.h.len() != f.psi.len() {
                    return Err(bad(format!("factor {i}: h needs one value per pole")));
                }
                Ok(ShilovFactor {
                    domain: f.domain,
                    points: f.psi.iter().map(|p| p.z).collect(),
                    phi: f.phi.build(f.domain)?,
                    h: f.h.clone(),
                })
            })
            .collect()
    }

    pub fn normalization(&self, o: &Overrides) -> Normalization {
        o.normalization
            .or(self.product.as_ref().and_then(|p| p.normalization))
            .unwrap_or(Normalization::PaperP2)
    }

    pub fn log_lambda(&self) -> Result<HarmonicExtension, ConfigError> {
        let d = self.domain()?;
        match &self.log_lambda {
            None => Ok(HarmonicExtension::zero(d)),
            Some(h) => h.build(d),
        }
    }
}

impl PhiCfg {
    pub fn build(&self, domain: Domain) -> Result<PhiSpec, ConfigError> {
        let phi = PhiSpec {
            green_part: self.green.iter().map(|g| (g.z, g.q)).collect(),
            harmonic: self.harmonic.as_ref().map(|h| h.build(domain)).transpose()?,
            zero_part: RootPoly {
                lead: C64::new(1.0, 0.0),
                roots: self.zeros.clone(),
            },
        };
        phi.validate(domain).map_err(|e| bad(format!("phi: {e}")))?;
        Ok(phi)
    }
}

impl HarmonicCfg {
    pub fn build(&self, domain: Domain) -> Result<HarmonicExtension, ConfigError> {
        let sum = |terms: &[FourierTerm], th: f64| {
            terms
                .iter()
                .map(|t| t.cos * (t.k as f64 * th).cos() + t.sin * (t.k as f64 * th).sin())
                .sum::<f64>()
        };
        HarmonicExtension::from_fn(domain, self.samples, |c, th| match c {
            Component::Outer => sum(&self.outer, th),
            Component::Inner => sum(&self.inner, th),
        })
        .map_err(|e| bad(format!("harmonic data: {e}")))
    }
}
