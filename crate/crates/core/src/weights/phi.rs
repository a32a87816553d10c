use crate::error::{Error, Result};
use crate::geometry::{check_distinct, Domain, Green, HarmonicExtension};
use crate::poly::RootPoly;
use crate::C64;

/// `φ = 2Σ qⱼ G(·, zⱼ) + 2u + 2 log|g|`.
///
/// `u` is harmonic on the closed domain (absent means zero) and `g` is a
/// polynomial. Zeros of `g` inside the domain and integer parts of the `qⱼ`
/// make `e^{−φ}` non-integrable; area problems absorb them into the basis
/// through [`PhiSpec::divisor_poly`].
#[derive(Clone, Debug, PartialEq)]
pub struct PhiSpec {
    pub green_part: Vec<(C64, f64)>,
    pub harmonic: Option<HarmonicExtension>,
    pub zero_part: RootPoly,
}

impl Default for PhiSpec {
    fn default() -> Self {
        PhiSpec::zero()
    }
}

impl PhiSpec {
    pub fn zero() -> Self {
        PhiSpec {
            green_part: vec![],
            harmonic: None,
            zero_part: RootPoly::one(),
        }
    }

    pub fn with_zeros(roots: Vec<C64>) -> Self {
        PhiSpec {
            zero_part: RootPoly {
                lead: C64::new(1.0, 0.0),
                roots,
            },
            ..PhiSpec::zero()
        }
    }

    pub fn with_harmonic(u: HarmonicExtension) -> Self {
        PhiSpec {
            harmonic: Some(u),
            ..PhiSpec::zero()
        }
    }

    pub fn validate(&self, domain: Domain) -> Result<()> {
        for &(z, q) in &self.green_part {
            if !(q >= 0.0 && q.is_finite()) {
                return Err(Error::InvalidInput(format!("green coefficient must be ≥ 0, got {q}")));
            }
            domain.require_interior(z)?;
        }
        let pts: Vec<C64> = self.green_part.iter().map(|g| g.0).collect();
        check_distinct(&pts)?;
        if self.zero_part.lead.norm() == 0.0 {
            return Err(Error::InvalidInput("polynomial lead coefficient is zero".into()));
        }
        for r in &self.zero_part.roots {
            let m = r.norm();
            let on_boundary =
                (m - 1.0).abs() < 1e-12 || matches!(domain, Domain::Annulus { q } if (m - q).abs() < 1e-12);
            if on_boundary {
                return Err(Error::OutOfDomain(format!("zero {r} of g lies on the boundary")));
            }
        }
        if let Some(u) = &self.harmonic {
            if u.domain != domain {
                return Err(Error::InvalidInput("harmonic part lives on another domain".into()));
            }
        }
        Ok(())
    }

    pub fn u(&self, z: C64) -> f64 {
        self.harmonic.as_ref().map_or(0.0, |u| u.eval(z))
    }

    /// Green coefficient `qⱼ` at `z`.
    pub fn green_weight_at(&self, z: C64) -> f64 {
        self.green_part
            .iter()
            .find(|g| (g.0 - z).norm() < crate::tol::COINCIDENT)
            .map_or(0.0, |g| g.1)
    }

    pub fn eval(&self, green: &Green, z: C64) -> f64 {
        let g: f64 = self
            .green_part
            .iter()
            .map(|&(w, q)| if q == 0.0 { 0.0 } else { q * green.value_unchecked(z, w) })
            .sum();
        2.0 * g + 2.0 * self.u(z) + 2.0 * self.zero_part.eval(z).norm().ln()
    }

    /// Zeros of `g` inside `domain`, with multiplicity.
    pub fn interior_zeros(&self, domain: Domain) -> Vec<C64> {
        self.zero_part
            .roots
            .iter()
            .copied()
            .filter(|r| domain.is_interior(*r))
            .collect()
    }

    /// `V` such that `|V|²e^{−φ}` is locally integrable: the interior zeros
    /// of `g` and `⌊qⱼ⌋`-fold copies of each Green point.
    pub fn divisor_poly(&self, domain: Domain) -> RootPoly {
        let mut roots = self.interior_zeros(domain);
        for &(z, q) in &self.green_part {
            for _ in 0..(q.floor() as usize) {
                roots.push(z);
            }
        }
        RootPoly {
            lead: C64::new(1.0, 0.0),
            roots,
        }
    }

    /// `φ − 2 log|V|` with `V` from [`PhiSpec::divisor_poly`], evaluated
    /// without cancellation.
    pub fn reduced(&self, green: &Green, z: C64) -> f64 {
        let domain = green.domain;
        let mut s = 0.0;
        for &(w, q) in &self.green_part {
            if q == 0.0 {
                continue;
            }
            let frac = q - q.floor();
            if frac > 0.0 {
                s += frac * (z - w).norm().ln();
            }
            s += q * green.regular(z, w);
        }
        let mut g = self.zero_part.lead.norm().ln();
        for r in &self.zero_part.roots {
            if !domain.is_interior(*r) {
                g += (z - r).norm().ln();
            }
        }
        2.0 * s + 2.0 * self.u(z) + 2.0 * g
    }
}
