use rustfft::FftPlanner;

use super::domain::{Component, Domain};
use crate::error::{Error, Result};
use crate::C64;

/// Harmonic function on the closed domain given by uniformly sampled boundary
/// values, solved mode by mode.
///
/// Disk: `u = c₀ + 2 Re Σ cₙ zⁿ`.
/// Annulus: `u = A + B log|z| + 2 Re Σ (αₙ zⁿ + βₙ (q/z̄)ⁿ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicExtension {
    pub domain: Domain,
    outer_samples: Vec<f64>,
    inner_samples: Vec<f64>,
    a: f64,
    b: f64,
    alpha: Vec<C64>,
    beta: Vec<C64>,
}

fn fourier(samples: &[f64]) -> Vec<C64> {
    let n = samples.len();
    let mut buf: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let modes = n.div_ceil(2);
    buf.truncate(modes);
    buf.iter_mut().for_each(|c| *c /= n as f64);
    buf
}

impl HarmonicExtension {
    /// The zero function.
    pub fn zero(domain: Domain) -> Self {
        let inner = match domain {
            Domain::Disk => vec![],
            Domain::Annulus { .. } => vec![0.0; 4],
        };
        Self::from_samples(domain, vec![0.0; 4], inner).expect("zero data")
    }

    /// Extension of boundary data given as a function of `(component, θ)`,
    /// sampled at `n` uniform angles per component.
    pub fn from_fn(domain: Domain, n: usize, f: impl Fn(Component, f64) -> f64) -> Result<Self> {
        let sample = |c| -> Vec<f64> {
            (0..n)
                .map(|i| f(c, std::f64::consts::TAU * i as f64 / n as f64))
                .collect()
        };
        let outer = sample(Component::Outer);
        let inner = match domain {
            Domain::Disk => vec![],
            Domain::Annulus { .. } => sample(Component::Inner),
        };
        Self::from_samples(domain, outer, inner)
    }

    /// Extension from samples at `θᵢ = 2πi/n`; `inner` must be empty on the disk
    /// and match `outer` in length on the annulus.
    pub fn from_samples(domain: Domain, outer: Vec<f64>, inner: Vec<f64>) -> Result<Self> {
        if outer.is_empty() {
            return Err(Error::GridMismatch("empty boundary data".into()));
        }
        if outer.iter().chain(&inner).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite boundary data".into()));
        }
        let co = fourier(&outer);
        match domain {
            Domain::Disk => {
                if !inner.is_empty() {
                    return Err(Error::GridMismatch("disk has a single boundary circle".into()));
                }
                Ok(HarmonicExtension {
                    domain,
                    a: co[0].re,
                    b: 0.0,
                    alpha: co[1..].to_vec(),
                    beta: vec![],
                    outer_samples: outer,
                    inner_samples: inner,
                })
            }
            Domain::Annulus { q } => {
                if inner.len() != outer.len() {
                    return Err(Error::GridMismatch(format!(
                        "outer has {} samples, inner has {}",
                        outer.len(),
                        inner.len()
                    )));
                }
                let ci = fourier(&inner);
                let a = co[0].re;
                let b = (ci[0].re - a) / q.ln();
                let mut alpha = Vec::with_capacity(co.len() - 1);
                let mut beta = Vec::with_capacity(co.len() - 1);
                for m in 1..co.len() {
                    // α + qᵐβ = c_out, qᵐα + β = c_in
                    let qm = q.powi(m as i32);
                    let det = 1.0 - qm * qm;
                    alpha.push((co[m] - ci[m] * qm) / det);
                    beta.push((ci[m] - co[m] * qm) / det);
                }
                Ok(HarmonicExtension {
                    domain,
                    a,
                    b,
                    alpha,
                    beta,
                    outer_samples: outer,
                    inner_samples: inner,
                })
            }
        }
    }

    pub fn outer_samples(&self) -> &[f64] {
        &self.outer_samples
    }

    pub fn inner_samples(&self) -> &[f64] {
        &self.inner_samples
    }

    /// Multiply `u` by `s` in place.
    pub fn scale(&mut self, s: f64) {
        self.outer_samples.iter_mut().for_each(|x| *x *= s);
        self.inner_samples.iter_mut().for_each(|x| *x *= s);
        self.a *= s;
        self.b *= s;
        self.alpha.iter_mut().for_each(|x| *x *= s);
        self.beta.iter_mut().for_each(|x| *x *= s);
    }

    /// Coefficient of `log|z|`.
    pub fn log_coefficient(&self) -> f64 {
        self.b
    }

    /// `∮_{|z|=q} ∂u/∂v ds` with the outer normal of the domain.
    pub fn inner_period(&self) -> f64 {
        -std::f64::consts::TAU * self.b
    }

    /// Value at a point of the closed domain.
    pub fn eval(&self, z: C64) -> f64 {
        let mut s = C64::new(0.0, 0.0);
        let mut zp = C64::new(1.0, 0.0);
        for c in &self.alpha {
            zp *= z;
            s += c * zp;
        }
        if let Domain::Annulus { q } = self.domain {
            let w = q / z.conj();
            let mut wp = C64::new(1.0, 0.0);
            for c in &self.beta {
                wp *= w;
                s += c * wp;
            }
            return self.a + self.b * z.norm().ln() + 2.0 * s.re;
        }
        self.a + 2.0 * s.re
    }

    /// Holomorphic completion `F` with `Re F = u` and `Im F(0) = 0`; disk only.
    pub fn completion(&self, z: C64) -> Result<C64> {
        if self.domain != Domain::Disk {
            return Err(Error::CharacterObstruction);
        }
        let mut s = C64::new(0.0, 0.0);
        let mut zp = C64::new(1.0, 0.0);
        for c in &self.alpha {
            zp *= z;
            s += c * zp;
        }
        Ok(C64::new(self.a, 0.0) + 2.0 * s)
    }
}

/// `f_u = exp(u + iũ)` on the disk.
#[derive(Clone, Debug)]
pub struct HolomorphicExponent {
    u: HarmonicExtension,
}

impl HolomorphicExponent {
    pub fn eval(&self, z: C64) -> C64 {
        self.u.completion(z).expect("disk checked at construction").exp()
    }
}

pub fn holomorphic_exponent(u: &HarmonicExtension) -> Result<HolomorphicExponent> {
    if u.domain != Domain::Disk {
        return Err(Error::CharacterObstruction);
    }
    Ok(HolomorphicExponent { u: u.clone() })
}
