use std::f64::consts::{PI, TAU};

use approx::assert_relative_eq;
use minl2::geometry::{Domain, Green};
use minl2::quadrature::*;
use minl2::weights::PsiSpec;
use minl2::{Error, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn area_integrals_on_the_disk() {
    let grid = AreaGrid::new(Domain::Disk, 32, 64);
    let nodes = Region::full(grid).nodes();
    assert_relative_eq!(integrate_area(&nodes, |_| 1.0), PI, max_relative = 1e-12);
    assert_relative_eq!(integrate_area(&nodes, |z| z.norm_sqr()), PI / 2.0, max_relative = 1e-12);
    let green = Green::new(Domain::Disk);
    let psi = PsiSpec::single(c(0.0, 0.0), 1.0);
    for t in [0.3, 1.0, 4.0] {
        let r = Region::sublevel(grid, |z| psi.eval(&green, z), t);
        assert_relative_eq!(
            integrate_area(&r.nodes(), |_| 1.0),
            PI * (-t).exp(),
            max_relative = 1e-12
        );
    }
    let samples = vec![1.0; nodes.len() - 1];
    assert!(matches!(
        integrate_samples(&nodes, &samples),
        Err(Error::GridMismatch(_))
    ));
}

#[test]
fn area_of_annulus_and_off_centre_sublevel() {
    let ann = Domain::annulus(0.3).unwrap();
    let nodes = Region::full(AreaGrid::new(ann, 24, 64)).nodes();
    assert_relative_eq!(integrate_area(&nodes, |_| 1.0), PI * (1.0 - 0.09), max_relative = 1e-12);
    // {G(·,w) < log s} is a disk; its area follows from the Möbius image
    let green = Green::new(Domain::Disk);
    let w = c(0.4, 0.0);
    let psi = PsiSpec::single(w, 1.0);
    let s: f64 = 0.5;
    let r = Region::sublevel(
        AreaGrid::new(Domain::Disk, 48, 256),
        |z| psi.eval(&green, z),
        -2.0 * s.ln(),
    );
    let rad = s * (1.0 - w.norm_sqr()) / (1.0 - s * s * w.norm_sqr());
    assert_relative_eq!(
        integrate_area(&r.nodes(), |_| 1.0),
        PI * rad * rad,
        max_relative = 1e-10
    );
}

#[test]
fn sublevel_regions_are_nested() {
    let green = Green::new(Domain::Disk);
    let psi = PsiSpec::new(vec![
        minl2::weights::Pole { z: c(0.3, 0.0), p: 1.0 },
        minl2::weights::Pole {
            z: c(-0.4, 0.2),
            p: 2.0,
        },
    ]);
    let grid = AreaGrid::new(Domain::Disk, 16, 128);
    let f = |z: C64| (z * z + 1.0).norm_sqr();
    let mut prev = f64::INFINITY;
    let mut prev_region: Option<Region> = None;
    for k in 0..8 {
        let t = 0.5 * k as f64;
        let r = Region::sublevel(grid, |z| psi.eval(&green, z), t);
        let v = integrate_area(&r.nodes(), f);
        assert!(v <= prev + 1e-14);
        if let Some(p) = &prev_region {
            assert!(r.is_subset_of(p));
        }
        prev = v;
        prev_region = Some(r);
    }
}

#[test]
fn boundary_integrals() {
    let grid = BoundaryGrid::new(Domain::Disk, 64);
    assert_relative_eq!(integrate_boundary(&grid, |_| 1.0, |_| 1.0), 1.0, epsilon = 1e-14);
    let w = c(0.5, 0.0);
    let p = integrate_boundary(&grid, |n| (1.0 - w.norm_sqr()) / (n.z - w).norm_sqr(), |_| 1.0);
    assert_relative_eq!(p, 1.0, epsilon = 1e-14);
    let f = integrate_boundary(&grid, |n| (n.z + n.z * n.z).norm_sqr(), |_| 1.0);
    assert_relative_eq!(f, 2.0, epsilon = 1e-14);
    let q = 0.4;
    let ann = BoundaryGrid::new(Domain::annulus(q).unwrap(), 64);
    let tot: f64 = ann.nodes().iter().map(|n| n.weight).sum();
    assert_relative_eq!(tot, TAU * (1.0 + q), epsilon = 1e-12);
}

#[test]
fn coarea_examples() {
    let green = Green::new(Domain::Disk);
    let psi = PsiSpec::single(c(0.0, 0.0), 1.0);
    let grid = AreaGrid::new(Domain::Disk, 32, 128);
    let r = 0.8;
    let rep = coarea_check(&green, &psi, |_| 1.0, r, grid, 256).unwrap();
    assert_relative_eq!(rep.lhs, PI * (1.0 - r * r), max_relative = 1e-12);
    assert!(rep.defect <= 1e-5 * rep.lhs, "{rep:?}");
    let rep = coarea_check(&green, &psi, |z| z.norm_sqr(), r, grid, 256).unwrap();
    assert_relative_eq!(rep.lhs, PI * (1.0 - r.powi(4)) / 2.0, max_relative = 1e-12);
    assert!(rep.defect <= 1e-5 * rep.lhs, "{rep:?}");
    // defect shrinks when the shell count grows
    let coarse = coarea_check(&green, &psi, |z| z.norm_sqr(), r, grid, 16).unwrap();
    let fine = coarea_check(&green, &psi, |z| z.norm_sqr(), r, grid, 64).unwrap();
    assert!(fine.defect < coarse.defect);
}

#[test]
fn coarea_two_pole_psi() {
    let green = Green::new(Domain::Disk);
    let psi = PsiSpec::new(vec![
        minl2::weights::Pole { z: c(0.0, 0.0), p: 1.0 },
        minl2::weights::Pole { z: c(0.5, 0.0), p: 1.0 },
    ]);
    let grid = AreaGrid::new(Domain::Disk, 32, 512);
    let rep = coarea_check(&green, &psi, |z| 1.0 + z.re, 0.9, grid, 256).unwrap();
    assert!(rep.defect <= 1e-4 * rep.lhs, "{rep:?}");
}

#[test]
fn monomial_sublevel_closed_form() {
    let one = c(1.0, 0.0);
    assert_relative_eq!(
        monomial_sublevel_integral(&[1.0], &[(vec![0], one)], 0.7).unwrap(),
        PI * (-0.7f64).exp(),
        max_relative = 1e-14
    );
    assert_relative_eq!(
        monomial_sublevel_integral(&[2.0, 2.0], &[(vec![0, 0], one)], 0.7).unwrap(),
        PI * PI * (-0.7f64).exp(),
        max_relative = 1e-14
    );
    assert_relative_eq!(
        monomial_sublevel_integral(&[2.0, 2.0], &[(vec![1, 0], one)], 0.7).unwrap(),
        PI * PI / 2.0 * (-1.05f64).exp(),
        max_relative = 1e-14
    );
}

#[test]
fn monomial_sublevel_matches_area_quadrature() {
    // one variable: the closed form at t=0 equals ∫_D |Σ b_n z^n|²
    let coeffs = vec![(vec![0], c(1.0, 0.5)), (vec![2], c(-0.3, 0.0)), (vec![5], c(0.0, 2.0))];
    let exact = monomial_sublevel_integral(&[1.0], &coeffs, 0.0).unwrap();
    let nodes = Region::full(AreaGrid::new(Domain::Disk, 16, 64)).nodes();
    let num = integrate_area(&nodes, |z| {
        coeffs.iter().map(|(a, b)| b * z.powu(a[0])).sum::<C64>().norm_sqr()
    });
    assert_relative_eq!(num, exact, max_relative = 1e-6);
}
