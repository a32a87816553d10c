use nalgebra::{DMatrix, DVector};

use super::domain::{multi_indices, Constraint, ProductDomain};
use super::tensor::{contract, eval_tensor, kron_vec, mode_apply};
use crate::error::{Error, Result};
use crate::minimizers::{cholesky, forward, least_norm_solve, Basis, Settings};
use crate::C64;

/// Converged constrained minimum over a tensor-product basis.
#[derive(Clone, Debug)]
pub struct ProductMin {
    pub value: f64,
    /// Row-major coefficient tensor, last factor fastest.
    pub coefficients: Vec<C64>,
    pub bases: Vec<Basis>,
    pub degree: usize,
    pub converged: bool,
    pub residual: f64,
    pub history: Vec<(usize, f64)>,
}

impl ProductMin {
    pub fn eval(&self, w: &[C64]) -> C64 {
        eval_tensor(&self.bases, &self.coefficients, w)
    }

    pub fn shape(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.len()).collect()
    }
}

pub(crate) struct Solved {
    pub value: f64,
    pub coeffs: Vec<C64>,
    pub residual: f64,
}

/// Per-factor change of basis `T` with `T*AT = I` and, for a pair, `T*BT = diag(λ)`.
pub(crate) struct FactorSystem {
    pub basis: Basis,
    pub t: DMatrix<C64>,
    pub lambda: Vec<f64>,
}

/// Which diagonal the transformed norm takes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Diag {
    /// `⊗ I`.
    Unit,
    /// `Σⱼ Λⱼ ⊗ (⊗_{l≠j} I)`, the face-sum norm.
    FaceSum,
}

/// `T = D⁻¹L^{−*}` for the equilibrated factorisation `D⁻¹AD⁻¹ = LL*`.
pub(crate) fn whiten(a: &DMatrix<C64>, degree: usize) -> Result<DMatrix<C64>> {
    let n = a.nrows();
    let d: Vec<f64> = (0..n).map(|i| a[(i, i)].re.sqrt()).collect();
    if d.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::DegenerateBasis(degree));
    }
    let ah = DMatrix::from_fn(n, n, |i, j| a[(i, j)] / (d[i] * d[j]));
    let l = cholesky(&ah, degree)?;
    let mut linv = DMatrix::<C64>::identity(n, n);
    forward(&l, &mut linv);
    let mut t = linv.adjoint();
    for i in 0..n {
        for j in 0..n {
            t[(i, j)] /= d[i];
        }
    }
    Ok(t)
}

/// Simultaneous diagonalisation of the Hermitian pair `(A, B)`, `A` definite.
pub(crate) fn pair_transform(a: &DMatrix<C64>, b: &DMatrix<C64>, degree: usize) -> Result<(DMatrix<C64>, Vec<f64>)> {
    let t0 = whiten(a, degree)?;
    let c = t0.adjoint() * b * &t0;
    let c = (&c + c.adjoint()) * C64::new(0.5, 0.0);
    let eig = c.symmetric_eigen();
    let lambda: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if lambda.iter().any(|x| !(*x > 0.0)) {
        return Err(Error::DegenerateBasis(degree));
    }
    Ok((t0 * eig.eigenvectors, lambda))
}

/// Factor rows of every constraint; rows the prefactor forces to zero are
/// dropped when their target vanishes.
fn constraint_rows(bases: &[&Basis], cons: &[Constraint], m: &ProductDomain) -> Result<(Vec<Vec<Vec<C64>>>, Vec<C64>)> {
    let mut rows = vec![];
    let mut rhs = vec![];
    for c in cons {
        let pt = m.point(&c.beta);
        let forced = bases
            .iter()
            .zip(&pt)
            .zip(&c.alpha)
            .any(|((b, &z), &a)| b.prefactor.order_at(z) > a as usize);
        if forced {
            if c.value.norm() != 0.0 {
                return Err(Error::InfeasibleConstraints);
            }
            continue;
        }
        let r: Vec<Vec<C64>> = bases
            .iter()
            .zip(&pt)
            .zip(&c.alpha)
            .map(|((b, &z), &a)| b.taylor_rows(z, a as usize).pop().unwrap_or_default())
            .collect();
        rows.push(r);
        rhs.push(c.value);
    }
    Ok((rows, rhs))
}

fn residual_of(rows: &[Vec<Vec<C64>>], rhs: &[C64], shape: &[usize], c: &[C64]) -> f64 {
    rows.iter()
        .zip(rhs)
        .map(|(r, b)| (contract(c, shape, r) - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Solve `S y = b` for Hermitian positive `S`; rank loss means the
/// constraints are dependent.
fn solve_hermitian(s: &DMatrix<C64>, b: &DVector<C64>) -> Result<DVector<C64>> {
    let m = s.nrows();
    let d: Vec<f64> = (0..m).map(|i| s[(i, i)].re.sqrt()).collect();
    if d.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::InfeasibleConstraints);
    }
    let sh = DMatrix::from_fn(m, m, |i, j| s[(i, j)] / (d[i] * d[j]));
    let l = cholesky(&sh, 0).map_err(|_| Error::InfeasibleConstraints)?;
    let mut y = DMatrix::from_fn(m, 1, |i, _| b[i] / d[i]);
    forward(&l, &mut y);
    let mut x = DVector::from_column_slice(y.as_slice());
    for i in (0..m).rev() {
        let mut v = x[i];
        for k in i + 1..m {
            v -= l[(k, i)].conj() * x[k];
        }
        x[i] = v / l[(i, i)].conj();
    }
    for (xi, di) in x.iter_mut().zip(&d) {
        *xi /= *di;
    }
    Ok(x)
}

/// Minimum of `x*Dx` under the constraints after the per-factor changes of
/// basis, returned in the original tensor basis.
pub(crate) fn kron_solve(
    systems: &[FactorSystem],
    diag: Diag,
    cons: &[Constraint],
    m: &ProductDomain,
) -> Result<Solved> {
    let bases: Vec<&Basis> = systems.iter().map(|s| &s.basis).collect();
    let shape: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let total: usize = shape.iter().product();
    let (rows, rhs) = constraint_rows(&bases, cons, m)?;
    if rows.is_empty() {
        return Ok(Solved {
            value: 0.0,
            coeffs: vec![C64::new(0.0, 0.0); total],
            residual: 0.0,
        });
    }
    let rhat: Vec<Vec<Vec<C64>>> = rows
        .iter()
        .map(|rl| {
            rl.iter()
                .zip(systems)
                .map(|(r, s)| {
                    (0..s.t.ncols())
                        .map(|i| (0..s.t.nrows()).map(|k| r[k] * s.t[(k, i)]).sum())
                        .collect()
                })
                .collect()
        })
        .collect();
    let mm = rows.len();
    let index = multi_indices(&shape);
    let dvals: Vec<f64> = match diag {
        Diag::Unit => vec![],
        Diag::FaceSum => index
            .iter()
            .map(|i| i.iter().zip(systems).map(|(&k, s)| s.lambda[k]).sum())
            .collect(),
    };
    let prod_at = |i: &[usize]| -> Vec<C64> {
        rhat.iter()
            .map(|ra| ra.iter().zip(i).map(|(r, &k)| r[k]).product())
            .collect()
    };
    let mut s = DMatrix::<C64>::zeros(mm, mm);
    if diag == Diag::Unit {
        for a in 0..mm {
            for b in 0..mm {
                s[(a, b)] = (0..systems.len())
                    .map(|l| {
                        rhat[a][l]
                            .iter()
                            .zip(&rhat[b][l])
                            .map(|(x, y)| x * y.conj())
                            .sum::<C64>()
                    })
                    .product();
            }
        }
    } else {
        for (i, dv) in index.iter().zip(&dvals) {
            let p = prod_at(i);
            for a in 0..mm {
                let pa = p[a] / *dv;
                for b in 0..mm {
                    s[(a, b)] += pa * p[b].conj();
                }
            }
        }
    }
    let b = DVector::from_vec(rhs.clone());
    let y = solve_hermitian(&s, &b)?;
    let value = b.dotc(&y).re;
    let mut x = vec![C64::new(0.0, 0.0); total];
    for (n, i) in index.iter().enumerate() {
        let p = prod_at(i);
        let dv = if diag == Diag::Unit { 1.0 } else { dvals[n] };
        x[n] = p.iter().zip(y.iter()).map(|(pa, ya)| ya * pa.conj()).sum::<C64>() / dv;
    }
    let mut c = x;
    let mut sh = shape.clone();
    for (l, sys) in systems.iter().enumerate() {
        (c, sh) = mode_apply(&c, &sh, l, &sys.t);
    }
    let residual = residual_of(&rows, &rhs, &shape, &c);
    Ok(Solved {
        value,
        coeffs: c,
        residual,
    })
}

/// Least-norm solve against an explicit tensor Gram matrix.
pub(crate) fn dense_solve(
    bases: &[Basis],
    gram: &DMatrix<C64>,
    cons: &[Constraint],
    m: &ProductDomain,
    degree: usize,
) -> Result<Solved> {
    let refs: Vec<&Basis> = bases.iter().collect();
    let (rows, rhs) = constraint_rows(&refs, cons, m)?;
    let total = gram.nrows();
    if rows.is_empty() {
        return Ok(Solved {
            value: 0.0,
            coeffs: vec![C64::new(0.0, 0.0); total],
            residual: 0.0,
        });
    }
    let full: Vec<Vec<C64>> = rows.iter().map(|r| kron_vec(r)).collect();
    let a = DMatrix::from_fn(full.len(), total, |i, j| full[i][j]);
    let b = DVector::from_vec(rhs);
    let sol = least_norm_solve(gram, &a, &b, degree)?;
    Ok(Solved {
        value: sol.value,
        coeffs: sol.coeffs.iter().copied().collect(),
        residual: sol.residual,
    })
}

/// Degree schedule shared by the tensor solvers.
pub(crate) fn run_product_schedule(
    schedule: &[usize],
    rel_tol: f64,
    mut step: impl FnMut(usize) -> Result<(Vec<Basis>, Solved)>,
) -> Result<ProductMin> {
    let mut best: Option<ProductMin> = None;
    let mut history = vec![];
    for &n in schedule {
        let (bases, sol) = match step(n) {
            Ok(x) => x,
            Err(Error::DegenerateBasis(_)) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        history.push((n, sol.value));
        let converged = best
            .as_ref()
            .is_some_and(|p| (p.value - sol.value).abs() <= rel_tol * sol.value.abs());
        best = Some(ProductMin {
            value: sol.value,
            coefficients: sol.coeffs,
            bases,
            degree: n,
            converged,
            residual: sol.residual,
            history: history.clone(),
        });
        if converged {
            break;
        }
    }
    best.ok_or_else(|| Error::InvalidInput("empty degree schedule".into()))
}

/// Largest degree the explicit tensor Gram path is run at.
pub(crate) const DENSE_MAX: usize = 32;

/// The schedule below [`DENSE_MAX`]. When it reaches the cap, a step just
/// below it is added so the last change can certify convergence at the cap.
pub(crate) fn dense_schedule(settings: &Settings) -> Vec<usize> {
    let mut s: Vec<usize> = settings.schedule.iter().copied().filter(|&n| n < DENSE_MAX).collect();
    if s.is_empty() || settings.schedule.iter().any(|&n| n >= DENSE_MAX) {
        if s.last().is_none_or(|&l| l < DENSE_MAX - 4) {
            s.push(DENSE_MAX - 4);
        }
        s.push(DENSE_MAX);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sched(s: &[usize]) -> Vec<usize> {
        dense_schedule(&Settings {
            schedule: s.to_vec(),
            ..Settings::default()
        })
    }

    #[test]
    fn dense_schedule_ends_with_a_certifying_pair() {
        assert_eq!(sched(&[16, 32, 64, 128]), vec![16, 28, 32]);
        assert_eq!(sched(&[8, 16, 32]), vec![8, 16, 28, 32]);
        assert_eq!(sched(&[30, 64]), vec![30, 32]);
        assert_eq!(sched(&[64]), vec![28, 32]);
        assert_eq!(sched(&[8, 16]), vec![8, 16]);
    }
}
