use serde::Serialize;

use crate::poly::RootPoly;
use crate::C64;

/// Scaled holomorphic basis families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisKind {
    /// `((z − center)/radius)ⁿ`, `n = 0..=N`.
    Monomial { center: C64, radius: f64 },
    /// `(z/r_out)ⁿ` for `n = 0..=N`, then `(r_in/z)ᵐ` for `m = 1..=N`.
    Laurent { r_out: f64, r_in: f64 },
}

/// A truncated basis, optionally multiplied by a fixed polynomial and listed
/// in a permuted order.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    pub kind: BasisKind,
    pub degree: usize,
    pub prefactor: RootPoly,
    order: Option<Vec<usize>>,
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl Basis {
    pub fn new(kind: BasisKind, degree: usize) -> Self {
        Basis {
            kind,
            degree,
            prefactor: RootPoly::one(),
            order: None,
        }
    }

    pub fn with_prefactor(mut self, v: RootPoly) -> Self {
        self.prefactor = v;
        self
    }

    /// Same functions listed as `perm[0], perm[1], …` of the natural order.
    pub fn permuted(mut self, perm: Vec<usize>) -> Self {
        assert_eq!(perm.len(), self.natural_len());
        self.order = Some(perm);
        self
    }

    fn natural_len(&self) -> usize {
        match self.kind {
            BasisKind::Monomial { .. } => self.degree + 1,
            BasisKind::Laurent { .. } => 2 * self.degree + 1,
        }
    }

    pub fn len(&self) -> usize {
        self.natural_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Laurent exponent of natural index `i`.
    pub fn exponent(&self, i: usize) -> i64 {
        match self.kind {
            BasisKind::Monomial { .. } => i as i64,
            BasisKind::Laurent { .. } => {
                if i <= self.degree {
                    i as i64
                } else {
                    -((i - self.degree) as i64)
                }
            }
        }
    }

    fn natural_values(&self, z: C64, out: &mut [C64]) {
        let one = C64::new(1.0, 0.0);
        match self.kind {
            BasisKind::Monomial { center, radius } => {
                let x = (z - center) / radius;
                let mut p = one;
                for o in out.iter_mut() {
                    *o = p;
                    p *= x;
                }
            }
            BasisKind::Laurent { r_out, r_in } => {
                let x = z / r_out;
                let mut p = one;
                for o in out.iter_mut().take(self.degree + 1) {
                    *o = p;
                    p *= x;
                }
                let y = C64::from(r_in) / z;
                let mut p = y;
                for o in out.iter_mut().skip(self.degree + 1) {
                    *o = p;
                    p *= y;
                }
            }
        }
    }

    /// Values of all basis functions at `z`, in listed order.
    pub fn values(&self, z: C64, out: &mut [C64]) {
        self.cofactor_values(z, out);
        let v = self.prefactor.eval(z);
        out.iter_mut().for_each(|o| *o *= v);
    }

    /// Values without the prefactor; Gram matrices pair these with `|V|²`-reduced weights.
    pub fn cofactor_values(&self, z: C64, out: &mut [C64]) {
        match &self.order {
            None => self.natural_values(z, out),
            Some(perm) => {
                let mut tmp = vec![C64::new(0.0, 0.0); out.len()];
                self.natural_values(z, &mut tmp);
                for (o, &p) in out.iter_mut().zip(perm) {
                    *o = tmp[p];
                }
            }
        }
    }

    /// Taylor coefficient of order `l` at `z` of the natural basis function `i`
    /// (without prefactor).
    fn natural_taylor(&self, i: usize, z: C64, l: usize) -> C64 {
        match self.kind {
            BasisKind::Monomial { center, radius } => {
                let n = i;
                if l > n {
                    return C64::new(0.0, 0.0);
                }
                let x = (z - center) / radius;
                x.powu((n - l) as u32) * binom(n, l) / radius.powi(l as i32)
            }
            BasisKind::Laurent { r_out, r_in } => {
                let e = self.exponent(i);
                if e >= 0 {
                    let n = e as usize;
                    if l > n {
                        return C64::new(0.0, 0.0);
                    }
                    (z / r_out).powu((n - l) as u32) * binom(n, l) / r_out.powi(l as i32)
                } else {
                    let m = (-e) as usize;
                    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                    (C64::from(r_in) / z).powu(m as u32) * z.powi(-(l as i32)) * (sign * binom(m + l - 1, l))
                }
            }
        }
    }

    /// Rows `l = 0..=k` of Taylor coefficients at `z`, prefactor included by
    /// the Leibniz rule.
    pub fn taylor_rows(&self, z: C64, k: usize) -> Vec<Vec<C64>> {
        let vt = self.prefactor.taylor(z, k);
        let n = self.len();
        let idx: Vec<usize> = match &self.order {
            None => (0..n).collect(),
            Some(p) => p.clone(),
        };
        (0..=k)
            .map(|l| {
                idx.iter()
                    .map(|&i| (0..=l).map(|m| vt[m] * self.natural_taylor(i, z, l - m)).sum())
                    .collect()
            })
            .collect()
    }

    /// `Σ cᵢ eᵢ(z)`.
    pub fn eval(&self, coeffs: &[C64], z: C64) -> C64 {
        let mut v = vec![C64::new(0.0, 0.0); self.len()];
        self.values(z, &mut v);
        v.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }
}
