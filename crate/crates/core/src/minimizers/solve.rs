use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tol;
use crate::C64;

/// Minimiser of `c*Gc` subject to `Ac = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub value: f64,
    pub coeffs: DVector<C64>,
    pub residual: f64,
}

/// Lower Cholesky factor of a Hermitian matrix with unit diagonal; pivots
/// below the floor are reported as degeneracy.
pub(crate) fn cholesky(g: &DMatrix<C64>, degree: usize) -> Result<DMatrix<C64>> {
    let n = g.nrows();
    let mut l = DMatrix::<C64>::zeros(n, n);
    for j in 0..n {
        let mut d = g[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > tol::PIVOT_FLOOR) {
            return Err(Error::DegenerateBasis(degree));
        }
        let ljj = d.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = g[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Solve `L X = B` in place, `L` lower triangular.
pub(crate) fn forward(l: &DMatrix<C64>, b: &mut DMatrix<C64>) {
    let n = l.nrows();
    for c in 0..b.ncols() {
        for i in 0..n {
            let mut s = b[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * b[(k, c)];
            }
            b[(i, c)] = s / l[(i, i)];
        }
    }
}

/// Solve `L* x = b` in place.
fn backward_adjoint(l: &DMatrix<C64>, x: &mut DVector<C64>) {
    let n = l.nrows();
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= l[(k, i)].conj() * x[k];
        }
        x[i] = s / l[(i, i)].conj();
    }
}

/// Constrained least-norm solve.
///
/// The Gram matrix is scaled to unit diagonal and factored `Ĝ = LL*`. With
/// `Y = L⁻¹Â*` and the thin QR `Y = QR`, the optimum is `value = ‖R^{−*}b‖²`
/// and `ĉ = L^{−*}Q R^{−*}b`. `degree` only labels errors.
pub fn least_norm_solve(gram: &DMatrix<C64>, a: &DMatrix<C64>, b: &DVector<C64>, degree: usize) -> Result<Solution> {
    let n = gram.nrows();
    let m = a.nrows();
    if gram.ncols() != n || a.ncols() != n || b.len() != m {
        return Err(Error::InvalidInput("inconsistent system dimensions".into()));
    }
    if m == 0 || m > n {
        return Err(Error::InfeasibleConstraints);
    }
    if gram.iter().chain(a.iter()).chain(b.iter()).any(|x| !x.is_finite()) {
        return Err(Error::WeightSingularity);
    }
    let d: Vec<f64> = (0..n).map(|i| gram[(i, i)].re.sqrt()).collect();
    if d.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::DegenerateBasis(degree));
    }
    let gh = DMatrix::<C64>::from_fn(n, n, |i, j| gram[(i, j)] / (d[i] * d[j]));
    let ah = DMatrix::<C64>::from_fn(m, n, |i, j| a[(i, j)] / d[j]);
    let l = cholesky(&gh, degree)?;
    let mut y = ah.adjoint();
    forward(&l, &mut y);

    let qr = y.qr();
    let r = qr.r();
    let q = qr.q();
    let rmax = (0..m).map(|k| r[(k, k)].norm()).fold(0.0, f64::max);
    if !(rmax > 0.0) || (0..m).any(|k| r[(k, k)].norm() <= tol::RANK_REL * rmax) {
        return Err(Error::InfeasibleConstraints);
    }
    // R* x = b
    let mut x = b.clone();
    for i in 0..m {
        let mut s = x[i];
        for k in 0..i {
            s -= r[(k, i)].conj() * x[k];
        }
        x[i] = s / r[(i, i)].conj();
    }
    let value = x.norm_squared();
    let mut c = &q * &x;
    backward_adjoint(&l, &mut c);
    for (ci, di) in c.iter_mut().zip(&d) {
        *ci /= *di;
    }
    let residual = (a * &c - b).norm();
    Ok(Solution {
        value,
        coeffs: c,
        residual,
    })
}

/// `c*Gc`.
pub fn quadratic_form(gram: &DMatrix<C64>, c: &DVector<C64>) -> f64 {
    c.dotc(&(gram * c)).re
}
