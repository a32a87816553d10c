use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gain function `c(t)` on `[0, ∞)`.
///
/// A tabulated gain stores samples `(tᵢ, cᵢ)` with `t₀ = 0`; `log c` is
/// interpolated linearly between samples and `c` is held at its last value
/// afterwards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gain {
    Constant1,
    Exponential { a: f64 },
    Tabulated { t: Vec<f64>, c: Vec<f64> },
}

/// Outcome of [`Gain::validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GainReport {
    pub integral: f64,
    pub grid_points: usize,
    pub max_increase: f64,
}

const GRID: usize = 1024;

impl Gain {
    /// `c(t)`; `t = +∞` is allowed (value at a pole of ψ).
    pub fn c(&self, t: f64) -> f64 {
        match self {
            Gain::Constant1 => 1.0,
            Gain::Exponential { a } => (-a * t).exp(),
            Gain::Tabulated { t: ts, c } => {
                let k = segment(ts, t);
                match k {
                    None => *c.last().unwrap(),
                    Some(k) => {
                        let (l0, l1) = (c[k].ln(), c[k + 1].ln());
                        let s = (t - ts[k]) / (ts[k + 1] - ts[k]);
                        (l0 + s * (l1 - l0)).exp()
                    }
                }
            }
        }
    }

    /// `c′(t)` (one-sided at sample points).
    pub fn c_prime(&self, t: f64) -> f64 {
        match self {
            Gain::Constant1 => 0.0,
            Gain::Exponential { a } => -a * (-a * t).exp(),
            Gain::Tabulated { t: ts, c } => match segment(ts, t) {
                None => 0.0,
                Some(k) => self.c(t) * slope(ts, c, k),
            },
        }
    }

    /// `∫₀^∞ c(t)e^{−t} dt`.
    pub fn integral(&self) -> f64 {
        self.tail(0.0)
    }

    /// `h(t) = ∫_t^∞ c(s)e^{−s} ds`.
    pub fn tail(&self, t: f64) -> f64 {
        match self {
            Gain::Constant1 => (-t).exp(),
            Gain::Exponential { a } => (-(1.0 + a) * t).exp() / (1.0 + a),
            Gain::Tabulated { t: ts, c } => {
                let last = ts.len() - 1;
                let mut acc = c[last] * (-ts[last].max(t)).exp();
                for k in (0..last).rev() {
                    if ts[k + 1] <= t {
                        break;
                    }
                    let lo = ts[k].max(t);
                    let b = slope(ts, c, k) - 1.0;
                    let la = c[k].ln() - slope(ts, c, k) * ts[k];
                    acc += exp_segment(la, b, lo, ts[k + 1]);
                }
                acc
            }
        }
    }

    /// Inverse of [`Gain::tail`] by bisection to `1e−12`.
    pub fn tail_inverse(&self, r: f64) -> Result<f64> {
        let h0 = self.tail(0.0);
        if !(r > 0.0 && r <= h0) {
            return Err(Error::Range(format!("r = {r} outside (0, {h0}]")));
        }
        if r == h0 {
            return Ok(0.0);
        }
        let mut hi = 1.0;
        while self.tail(hi) > r {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::Range(format!("r = {r} too small")));
            }
        }
        let mut lo = 0.0;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if self.tail(mid) > r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Admissibility: `c(0) = 1`, `c(t)e^{−t}` non-increasing on a 1024-point
    /// log grid, finite integral.
    pub fn validate(&self) -> Result<GainReport> {
        match self {
            Gain::Exponential { a } if !(*a > 0.0 && a.is_finite()) => {
                return Err(Error::InadmissibleGain(format!(
                    "exponential rate must be positive, got {a}"
                )))
            }
            Gain::Tabulated { t, c } => {
                if t.len() < 2 || t.len() != c.len() {
                    return Err(Error::InadmissibleGain("table needs ≥ 2 matching samples".into()));
                }
                if t[0] != 0.0 {
                    return Err(Error::InadmissibleGain("c(0)=1: table must start at t=0".into()));
                }
                if t.windows(2).any(|w| !(w[1] > w[0])) || t.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InadmissibleGain("sample times must increase".into()));
                }
                if c.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                    return Err(Error::InadmissibleGain("samples must be positive".into()));
                }
            }
            _ => {}
        }
        if (self.c(0.0) - 1.0).abs() > 1e-14 {
            return Err(Error::InadmissibleGain("c(0)=1".into()));
        }
        let t_max = match self {
            Gain::Tabulated { t, .. } => 2.0 * t.last().unwrap(),
            _ => 50.0,
        };
        let mut prev = self.c(0.0);
        let mut max_increase = f64::NEG_INFINITY;
        for i in 0..GRID {
            let t = t_max * 10f64.powf(-6.0 + 6.0 * i as f64 / (GRID - 1) as f64);
            let v = self.c(t) * (-t).exp();
            let inc = (v - prev) / prev.max(f64::MIN_POSITIVE);
            max_increase = max_increase.max(inc);
            if inc > 1e-12 {
                return Err(Error::InadmissibleGain(format!(
                    "c(t)e^(-t) non-increasing: rises at t = {t:.6e}"
                )));
            }
            prev = v;
        }
        let integral = self.integral();
        if !(integral.is_finite() && integral > 0.0) {
            return Err(Error::InadmissibleGain("finite integral".into()));
        }
        Ok(GainReport {
            integral,
            grid_points: GRID,
            max_increase,
        })
    }
}

/// Index `k` with `t ∈ [tₖ, tₖ₊₁)`, or `None` past the table.
fn segment(ts: &[f64], t: f64) -> Option<usize> {
    if t >= *ts.last().unwrap() || t.is_nan() {
        return None;
    }
    let k = ts.partition_point(|&x| x <= t);
    Some(k.saturating_sub(1))
}

fn slope(ts: &[f64], c: &[f64], k: usize) -> f64 {
    (c[k + 1].ln() - c[k].ln()) / (ts[k + 1] - ts[k])
}

/// `∫_lo^hi exp(la + b s) ds`.
fn exp_segment(la: f64, b: f64, lo: f64, hi: f64) -> f64 {
    let w = hi - lo;
    if b == 0.0 {
        return la.exp() * w;
    }
    (la + b * lo).exp() * (b * w).exp_m1() / b
}
