use std::f64::consts::PI;

use approx::assert_relative_eq;
use minl2::geometry::{Domain, Green};
use minl2::minimizers::*;
use minl2::poly::RootPoly;
use minl2::quadrature::{AreaGrid, BoundaryGrid, Region};
use minl2::weights::{Gain, PhiSpec, PsiSpec};
use minl2::{Error, C64};
use nalgebra::{DMatrix, DVector};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn one() -> C64 {
    c(1.0, 0.0)
}

fn small() -> Settings {
    Settings {
        schedule: vec![8, 16, 32],
        ..Settings::default()
    }
}

fn area_points(region: &Region) -> Vec<(C64, f64)> {
    region.nodes().iter().map(|n| (n.z, n.weight)).collect()
}

#[test]
fn disk_area_gram_is_diagonal() {
    let basis = Basis::new(
        BasisKind::Monomial {
            center: c(0.0, 0.0),
            radius: 1.0,
        },
        12,
    );
    let g = assemble_gram(&basis, &area_points(&Region::full(AreaGrid::new(Domain::Disk, 24, 64)))).unwrap();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let expect = if i == j { PI / (i as f64 + 1.0) } else { 0.0 };
            assert!((g[(i, j)] - expect).norm() <= 1e-10, "{i} {j} {}", g[(i, j)]);
        }
    }
}

#[test]
fn boundary_grams() {
    let basis = Basis::new(
        BasisKind::Monomial {
            center: c(0.0, 0.0),
            radius: 1.0,
        },
        10,
    );
    let pts: Vec<(C64, f64)> = BoundaryGrid::new(Domain::Disk, 64)
        .nodes()
        .iter()
        .map(|n| (n.z, n.weight / std::f64::consts::TAU))
        .collect();
    let g = assemble_gram(&basis, &pts).unwrap();
    assert!((g - DMatrix::identity(basis.len(), basis.len())).norm() <= 1e-13);

    let q: f64 = 0.5;
    let ann = Domain::annulus(q).unwrap();
    let basis = Basis::new(BasisKind::Laurent { r_out: 1.0, r_in: q }, 6);
    let pts: Vec<(C64, f64)> = BoundaryGrid::new(ann, 64)
        .nodes()
        .iter()
        .map(|n| (n.z, n.weight / std::f64::consts::TAU))
        .collect();
    let g = assemble_gram(&basis, &pts).unwrap();
    // the basis is normalised, so compare normalised entries
    for i in 0..basis.len() {
        let n = basis.exponent(i) as i32;
        let raw = 1.0 + q.powi(2 * n + 1);
        let mut v = vec![c(0.0, 0.0); basis.len()];
        let mut e = vec![c(0.0, 0.0); basis.len()];
        e[i] = one();
        let z = c(0.7, 0.2);
        basis.values(z, &mut v);
        let scale = v[i].norm() / z.norm().powi(n);
        assert_relative_eq!(g[(i, i)].re, raw * scale * scale, max_relative = 1e-12);
    }
}

#[test]
fn annulus_area_gram_matches_analytic() {
    let q: f64 = 0.25;
    let ann = Domain::annulus(q).unwrap();
    let basis = Basis::new(BasisKind::Laurent { r_out: 1.0, r_in: q }, 16);
    let g = assemble_gram(&basis, &area_points(&Region::full(AreaGrid::new(ann, 40, 128)))).unwrap();
    let z = c(0.6, 0.0);
    let mut v = vec![c(0.0, 0.0); basis.len()];
    basis.values(z, &mut v);
    for i in 0..basis.len() {
        let n = basis.exponent(i);
        let raw = if n == -1 {
            2.0 * PI * (1.0 / q).ln()
        } else {
            PI * (1.0 - q.powi(2 * n as i32 + 2)) / (n as f64 + 1.0)
        };
        let scale = v[i].norm() / z.norm().powi(n as i32);
        assert_relative_eq!(g[(i, i)].re, raw * scale * scale, max_relative = 1e-12);
        for j in 0..basis.len() {
            if i != j {
                assert!(g[(i, j)].norm() <= 1e-10 * (g[(i, i)].re * g[(j, j)].re).sqrt());
            }
        }
    }
}

#[test]
fn least_norm_examples() {
    let settings = small();
    let region = Region::full(settings.area_grid(Domain::Disk));
    let m = area_min(
        Domain::Disk,
        &region,
        &|_| 1.0,
        &RootPoly::one(),
        &Jets::value(c(0.0, 0.0), one()),
        &settings,
    )
    .unwrap();
    assert_relative_eq!(m.value, PI, max_relative = 1e-12);
    for z in [c(0.3, 0.2), c(-0.5, 0.1)] {
        assert!((m.eval(z) - 1.0).norm() < 1e-10);
    }
    let green = Green::new(Domain::Disk);
    let psi = PsiSpec::single(c(0.0, 0.0), 1.0);
    let jets = Jets::taylor(c(0.0, 0.0), vec![c(0.0, 0.0), one()]);
    let m = hardy_min(&green, &PhiSpec::zero(), &psi, &jets, &settings).unwrap();
    assert_relative_eq!(m.value, 1.0, max_relative = 1e-12);
    assert!((m.eval(c(0.4, 0.1)) - c(0.4, 0.1)).norm() < 1e-10);
    let m2 = hardy_min(&green, &PhiSpec::zero(), &psi, &jets.scaled(c(2.0, 0.0)), &settings).unwrap();
    assert_relative_eq!(m2.value, 4.0 * m.value, max_relative = 1e-12);
}

#[test]
fn solver_errors() {
    let g = DMatrix::<C64>::identity(3, 3);
    let a = DMatrix::from_row_slice(2, 3, &[one(), one(), one(), one(), one(), one()]);
    let b = DVector::from_vec(vec![one(), one()]);
    assert!(matches!(
        least_norm_solve(&g, &a, &b, 3),
        Err(Error::InfeasibleConstraints)
    ));
    let mut g = DMatrix::<C64>::identity(3, 3);
    g[(0, 1)] = one();
    g[(1, 0)] = one();
    let a = DMatrix::from_row_slice(1, 3, &[one(), c(0.0, 0.0), c(0.0, 0.0)]);
    let b = DVector::from_vec(vec![one()]);
    assert!(matches!(
        least_norm_solve(&g, &a, &b, 3),
        Err(Error::DegenerateBasis(3))
    ));
}

#[test]
fn bergman_examples() {
    let settings = small();
    let green = Green::new(Domain::Disk);
    let psi = PsiSpec::single(c(0.0, 0.0), 1.0);
    let phi = PhiSpec::zero();
    let jets = Jets::value(c(0.0, 0.0), one());
    let m = bergman_min(&green, &phi, &psi, &Gain::Constant1, &jets, 0.0, &settings).unwrap();
    assert_relative_eq!(m.value, PI, max_relative = 1e-10);
    let m = bergman_min(&green, &phi, &psi, &Gain::Exponential { a: 1.0 }, &jets, 0.0, &settings).unwrap();
    assert_relative_eq!(m.value, PI / 2.0, max_relative = 1e-10);
    for t in [0.5, 2.0] {
        let m = bergman_min(&green, &phi, &psi, &Gain::Constant1, &jets, t, &settings).unwrap();
        assert_relative_eq!(m.value, PI * (-t).exp(), max_relative = 1e-10);
    }
    assert!(matches!(
        bergman_min(&green, &phi, &psi, &Gain::Constant1, &jets, -1.0, &settings),
        Err(Error::Range(_))
    ));
}

#[test]
fn hardy_examples() {
    let settings = small();
    let green = Green::new(Domain::Disk);
    let jets = Jets::value(c(0.0, 0.0), one());
    let m = hardy_min(
        &green,
        &PhiSpec::zero(),
        &PsiSpec::single(c(0.0, 0.0), 1.0),
        &jets,
        &settings,
    )
    .unwrap();
    assert_relative_eq!(m.value, 1.0, max_relative = 1e-12);
    let m = hardy_min(
        &green,
        &PhiSpec::zero(),
        &PsiSpec::single(c(0.0, 0.0), 2.0),
        &jets,
        &settings,
    )
    .unwrap();
    assert_relative_eq!(m.value, 0.5, max_relative = 1e-12);
}

#[test]
fn kernels_on_the_disk() {
    let settings = small();
    let b0 = kernel_bergman(Domain::Disk, c(0.0, 0.0), &settings).unwrap();
    assert_relative_eq!(b0, 1.0 / PI, max_relative = 1e-10);
    let k0 = kernel_conjugate_hardy(Domain::Disk, c(0.0, 0.0), &settings).unwrap();
    assert_relative_eq!(k0, 1.0, max_relative = 1e-10);
    let s = Settings::default();
    let b = kernel_bergman(Domain::Disk, c(0.5, 0.0), &s).unwrap();
    assert_relative_eq!(b, 1.0 / (PI * 0.75 * 0.75), max_relative = 1e-7);
    let k = kernel_conjugate_hardy(Domain::Disk, c(0.5, 0.0), &s).unwrap();
    assert_relative_eq!(k, PI * b, max_relative = 1e-7);
}

#[test]
fn annulus_kernel_gap_is_positive() {
    let ann = Domain::annulus(0.25).unwrap();
    let s = Settings::default();
    let z = c(0.5, 0.0);
    let k = kernel_conjugate_hardy(ann, z, &s).unwrap();
    let b = kernel_bergman(ann, z, &s).unwrap();
    assert!(k - PI * b > 1e-3, "{k} {}", PI * b);
}

#[test]
fn orthogonality_examples() {
    let settings = small();
    let region = Region::full(settings.area_grid(Domain::Disk));
    let m = area_min(
        Domain::Disk,
        &region,
        &|_| 1.0,
        &RootPoly::one(),
        &Jets::value(c(0.0, 0.0), one()),
        &settings,
    )
    .unwrap();
    let n = m.coefficients.len();
    let coeffs_of = |f: &dyn Fn(usize) -> C64| -> Vec<C64> {
        // coefficients in the normalised monomial basis: solve via point values is overkill,
        // the basis is z^n scaled, so read the scale from basis values at z=1
        let mut v = vec![c(0.0, 0.0); n];
        m.basis.values(one(), &mut v);
        (0..n).map(|i| f(i) / v[i]).collect()
    };
    let alt1 = coeffs_of(&|i| if i <= 1 { one() } else { c(0.0, 0.0) });
    assert!(orthogonality_residual(&m, &alt1).unwrap() <= 1e-12);
    let alt2 = coeffs_of(&|i| if i == 0 || i == 2 { one() } else { c(0.0, 0.0) });
    assert!(orthogonality_residual(&m, &alt2).unwrap() <= 1e-8);
    let bad = coeffs_of(&|i| if i == 0 { c(2.0, 0.0) } else { c(0.0, 0.0) });
    assert!(matches!(
        orthogonality_residual(&m, &bad),
        Err(Error::ConstraintResidual(_))
    ));
}

#[test]
fn monotone_in_degree() {
    let green = Green::new(Domain::annulus(0.3).unwrap());
    let psi = PsiSpec::single(c(0.55, 0.0), 1.0);
    let jets = Jets::new(vec![JetPoint {
        z: c(0.55, 0.0),
        taylor: vec![one()],
    }]);
    let settings = Settings {
        schedule: vec![4, 12, 20, 28],
        rel_tol: 0.0,
        ..Settings::default()
    };
    let m = hardy_min(&green, &PhiSpec::zero(), &psi, &jets, &settings).unwrap();
    for w in m.history.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-12, "{:?}", m.history);
    }
}
