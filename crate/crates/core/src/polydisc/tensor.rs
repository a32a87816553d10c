use nalgebra::DMatrix;

use crate::minimizers::Basis;
use crate::C64;

/// Apply `t` along mode `l` of a row-major tensor; the mode length becomes `t.nrows()`.
pub(crate) fn mode_apply(x: &[C64], shape: &[usize], l: usize, t: &DMatrix<C64>) -> (Vec<C64>, Vec<usize>) {
    debug_assert_eq!(t.ncols(), shape[l]);
    let outer: usize = shape[..l].iter().product();
    let inner: usize = shape[l + 1..].iter().product();
    let (n_in, n_out) = (shape[l], t.nrows());
    let mut y = vec![C64::new(0.0, 0.0); outer * n_out * inner];
    for o in 0..outer {
        let xs = &x[o * n_in * inner..(o + 1) * n_in * inner];
        let ys = &mut y[o * n_out * inner..(o + 1) * n_out * inner];
        for k in 0..n_in {
            let xk = &xs[k * inner..(k + 1) * inner];
            for i in 0..n_out {
                let a = t[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for (yv, xv) in ys[i * inner..(i + 1) * inner].iter_mut().zip(xk) {
                    *yv += a * xv;
                }
            }
        }
    }
    let mut s = shape.to_vec();
    s[l] = n_out;
    (y, s)
}

/// `Σᵢ xᵢ Πₗ vₗ[iₗ]` for a row-major tensor `x`.
pub(crate) fn contract(x: &[C64], shape: &[usize], v: &[Vec<C64>]) -> C64 {
    let mut cur = x.to_vec();
    for l in (0..shape.len()).rev() {
        let n = shape[l];
        cur = cur
            .chunks(n)
            .map(|c| c.iter().zip(&v[l]).map(|(a, b)| a * b).sum())
            .collect();
    }
    cur[0]
}

/// Row-major Kronecker product of vectors.
pub(crate) fn kron_vec(v: &[Vec<C64>]) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for f in v {
        out = out.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect();
    }
    out
}

/// Row-major Kronecker product of matrices.
pub(crate) fn kron_mat(m: &[&DMatrix<C64>]) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    for f in m {
        out = out.kronecker(*f);
    }
    out
}

/// Values `f(w)` of a tensor-product expansion.
pub(crate) fn eval_tensor(bases: &[Basis], coeffs: &[C64], w: &[C64]) -> C64 {
    let v: Vec<Vec<C64>> = bases
        .iter()
        .zip(w)
        .map(|(b, &z)| {
            let mut out = vec![C64::new(0.0, 0.0); b.len()];
            b.values(z, &mut out);
            out
        })
        .collect();
    let shape: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    contract(coeffs, &shape, &v)
}
