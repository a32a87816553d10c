use std::f64::consts::PI;

use approx::assert_relative_eq;
use minl2::analysis::*;
use minl2::geometry::{Domain, Green, HarmonicExtension};
use minl2::minimizers::{JetPoint, Jets, Settings};
use minl2::weights::{Gain, PhiSpec, Pole, PsiSpec};
use minl2::{Error, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn zero() -> C64 {
    c(0.0, 0.0)
}

fn one() -> C64 {
    c(1.0, 0.0)
}

fn fast() -> Settings {
    Settings {
        schedule: vec![8, 16, 32],
        ..Settings::default()
    }
}

fn disk() -> Green {
    Green::new(Domain::Disk)
}

#[test]
fn g_curve_scaled_disk() {
    let psi = PsiSpec::single(zero(), 1.0);
    let t: Vec<f64> = (0..6).map(|i| 0.5 * i as f64).collect();
    let curve = g_curve(
        &disk(),
        &PhiSpec::zero(),
        &psi,
        &Gain::Constant1,
        &Jets::value(zero(), one()),
        &t,
        &fast(),
    )
    .unwrap();
    for (ti, gi) in t.iter().zip(&curve.g) {
        assert_relative_eq!(*gi, PI * (-ti).exp(), max_relative = 1e-10);
    }
    assert_relative_eq!(curve.g[0], PI, max_relative = 1e-10);
    let rep = concavity_report(&curve, 1e-6, 1e-6).unwrap();
    assert!(rep.concave && rep.linear, "{rep:?}");
}

#[test]
fn g_curve_first_derivative_jet() {
    let psi = PsiSpec::single(zero(), 2.0);
    let jets = Jets::taylor(zero(), vec![zero(), one()]);
    let t = [0.0, 0.7, 1.4];
    let curve = g_curve(&disk(), &PhiSpec::zero(), &psi, &Gain::Constant1, &jets, &t, &fast()).unwrap();
    for (ti, gi) in t.iter().zip(&curve.g) {
        assert_relative_eq!(*gi, PI / 2.0 * (-ti).exp(), max_relative = 1e-10);
    }
}

#[test]
fn g_curve_requires_lelong() {
    let psi = PsiSpec::single(zero(), 1.0);
    let jets = Jets::taylor(zero(), vec![zero(), one()]);
    assert!(matches!(
        g_curve(
            &disk(),
            &PhiSpec::zero(),
            &psi,
            &Gain::Constant1,
            &jets,
            &[0.0],
            &fast()
        ),
        Err(Error::LelongFailed(0))
    ));
}

#[test]
fn concavity_two_pole_asymmetric() {
    let psi = PsiSpec::new(vec![
        Pole { z: c(0.3, 0.0), p: 1.0 },
        Pole {
            z: c(-0.4, 0.2),
            p: 1.0,
        },
    ]);
    let jets = Jets::new(vec![
        JetPoint {
            z: c(0.3, 0.0),
            taylor: vec![one()],
        },
        JetPoint {
            z: c(-0.4, 0.2),
            taylor: vec![c(-2.0, 0.5)],
        },
    ]);
    let t: Vec<f64> = (0..8).map(|i| 0.4 * i as f64).collect();
    let settings = Settings::default();
    let curve = g_curve(&disk(), &PhiSpec::zero(), &psi, &Gain::Constant1, &jets, &t, &settings).unwrap();
    let rep = concavity_report(&curve, 1e-6, 1e-6).unwrap();
    assert!(rep.concave, "{rep:?}");
    assert!(rep.strict_nodes >= 1, "{rep:?}");
    assert!(!rep.linear);
    let scaled = concavity_report(&curve.scaled(3.0), 1e-6, 1e-6).unwrap();
    assert_eq!(
        (scaled.concave, scaled.linear, scaled.strict_nodes),
        (rep.concave, rep.linear, rep.strict_nodes)
    );
}

#[test]
fn concavity_grid_errors() {
    let gain = Gain::Constant1;
    let short = GCurve::from_values(&gain, vec![0.0, 1.0, 2.0], vec![3.0, 2.0, 1.0]);
    assert!(matches!(concavity_report(&short, 1e-6, 1e-6), Err(Error::Grid(_))));
    let bad = GCurve::from_values(&gain, vec![0.0, 1.0, 0.5, 2.0, 3.0], vec![5.0, 4.0, 3.0, 2.0, 1.0]);
    assert!(matches!(concavity_report(&bad, 1e-6, 1e-6), Err(Error::Grid(_))));
    // a convex curve in r is rejected
    let t: Vec<f64> = (0..6).map(|i| i as f64 * 0.5).collect();
    let g: Vec<f64> = t.iter().map(|x| (-2.0 * x).exp()).collect();
    let rep = concavity_report(&GCurve::from_values(&gain, t, g), 1e-6, 1e-6).unwrap();
    assert!(!rep.concave);
}

#[test]
fn relation_disk_equality() {
    let psi = PsiSpec::single(zero(), 1.0);
    let jets = Jets::value(zero(), one());
    let rep = theorem1_relation(&disk(), &PhiSpec::zero(), &psi, &Gain::Constant1, &jets, &fast()).unwrap();
    assert_relative_eq!(rep.m_h, 1.0, max_relative = 1e-10);
    assert_relative_eq!(rep.m, PI, max_relative = 1e-10);
    assert_relative_eq!(rep.bound, 1.0, max_relative = 1e-10);
    assert!(rep.gap.abs() <= 1e-6);
    assert_eq!(rep.verdict, Verdict::Equality);
    let rep = theorem1_relation(
        &disk(),
        &PhiSpec::zero(),
        &psi,
        &Gain::Exponential { a: 1.0 },
        &jets,
        &fast(),
    )
    .unwrap();
    assert_relative_eq!(rep.m, PI / 2.0, max_relative = 1e-10);
    assert_relative_eq!(rep.integral, 0.5, max_relative = 1e-14);
    assert_relative_eq!(rep.bound, 1.0, max_relative = 1e-10);
    assert_eq!(rep.verdict, Verdict::Equality);
}

#[test]
fn relation_annulus_is_strict() {
    let green = Green::new(Domain::annulus(0.25).unwrap());
    let z = c(0.5, 0.0);
    let rep = theorem1_relation(
        &green,
        &PhiSpec::zero(),
        &PsiSpec::single(z, 1.0),
        &Gain::Constant1,
        &Jets::value(z, one()),
        &Settings::default(),
    )
    .unwrap();
    assert!(rep.gap > 1e-3 * rep.bound, "{rep:?}");
    assert_eq!(rep.verdict, Verdict::Strict);
}

#[test]
fn certificate_disk_simple() {
    let psi = PsiSpec::single(zero(), 1.0);
    let cert = equality_certificate(&disk(), &PhiSpec::zero(), &psi, &Jets::value(zero(), c(2.0, 0.0)), true).unwrap();
    assert!(cert.verdict && cert.divisor && cert.psi_poles && cert.character);
    assert_eq!(cert.ratio, Some(true));
    assert!((cert.c0[0] - 0.5).norm() < 1e-14);
}

#[test]
fn certificate_character_defects() {
    let q: f64 = 0.25;
    let green = Green::new(Domain::annulus(q).unwrap());
    let a = c(q.sqrt(), 0.0);
    let cert = equality_certificate(
        &green,
        &PhiSpec::zero(),
        &PsiSpec::single(a, 1.0),
        &Jets::value(a, one()),
        false,
    )
    .unwrap();
    assert_relative_eq!(cert.character_defect, PI, epsilon = 1e-12);
    assert!(!cert.character && !cert.verdict);
    assert_eq!(cert.ratio, None);
    let b = -a;
    let psi = PsiSpec::new(vec![Pole { z: a, p: 1.0 }, Pole { z: b, p: 1.0 }]);
    let jets = Jets::new(vec![
        JetPoint {
            z: a,
            taylor: vec![one()],
        },
        JetPoint {
            z: b,
            taylor: vec![one()],
        },
    ]);
    let cert = equality_certificate(&green, &PhiSpec::zero(), &psi, &jets, false).unwrap();
    assert!(cert.character_defect <= 1e-12 && cert.character);
    assert!(matches!(
        equality_certificate(&green, &PhiSpec::zero(), &psi, &jets, true),
        Err(Error::StatementFourDiskOnly)
    ));
}

#[test]
fn certificate_detects_divisor_mismatch() {
    // ψ with a pole where nothing is prescribed
    let psi = PsiSpec::new(vec![Pole { z: zero(), p: 1.0 }, Pole { z: c(0.5, 0.0), p: 1.0 }]);
    let cert = equality_certificate(&disk(), &PhiSpec::zero(), &psi, &Jets::value(zero(), one()), true).unwrap();
    assert!(!cert.divisor && !cert.psi_poles && !cert.verdict);
}

#[test]
fn extremal_examples() {
    let s = fast();
    let psi = PsiSpec::single(zero(), 1.0);
    let (f0, rep) = extremal_disk(
        &PhiSpec::zero(),
        &psi,
        &Gain::Constant1,
        &Jets::value(zero(), one()),
        &s,
    )
    .unwrap();
    for z in [c(0.3, 0.1), c(-0.6, 0.2)] {
        assert!((f0.eval(z) - 1.0).norm() < 1e-14);
    }
    assert!(rep.jet_residual < 1e-12);
    assert!(
        rep.area_rel_error() <= 1e-6 && rep.boundary_rel_error() <= 1e-6,
        "{rep:?}"
    );

    let phi = PhiSpec::with_zeros(vec![zero()]);
    let jets = Jets::taylor(zero(), vec![zero(), one()]);
    let (f0, rep) = extremal_disk(&phi, &psi, &Gain::Constant1, &jets, &s).unwrap();
    for z in [c(0.3, 0.1), c(-0.6, 0.2)] {
        assert!((f0.eval(z) - z).norm() < 1e-14);
    }
    assert!(rep.jet_residual < 1e-12);
    assert!(
        rep.area_rel_error() <= 1e-6 && rep.boundary_rel_error() <= 1e-6,
        "{rep:?}"
    );

    let (f3, _) = extremal_disk(&phi, &psi, &Gain::Constant1, &jets.scaled(c(3.0, -1.0)), &s).unwrap();
    let z = c(0.2, 0.4);
    assert!((f3.eval(z) - f0.eval(z) * c(3.0, -1.0)).norm() < 1e-13);
}

#[test]
fn extremal_requires_certificate() {
    let psi = PsiSpec::new(vec![Pole { z: zero(), p: 1.0 }, Pole { z: c(0.5, 0.0), p: 1.0 }]);
    assert!(matches!(
        extremal_disk(
            &PhiSpec::zero(),
            &psi,
            &Gain::Constant1,
            &Jets::value(zero(), one()),
            &fast()
        ),
        Err(Error::NoExtremalFormula(_))
    ));
}

#[test]
fn extremal_two_points_with_harmonic_weight() {
    let s = Settings::default();
    let u = HarmonicExtension::from_fn(Domain::Disk, 64, |_, th| 0.3 * th.cos() - 0.2 * (2.0 * th).sin()).unwrap();
    let phi = PhiSpec::with_harmonic(u);
    let (a, b) = (c(0.2, 0.1), c(-0.3, -0.25));
    let psi = PsiSpec::new(vec![Pole { z: a, p: 1.0 }, Pole { z: b, p: 1.0 }]);
    // choose the second value so that c₀ agrees at both points
    let probe = Jets::new(vec![
        JetPoint {
            z: a,
            taylor: vec![one()],
        },
        JetPoint {
            z: b,
            taylor: vec![one()],
        },
    ]);
    let cert = equality_certificate(&disk(), &phi, &psi, &probe, true).unwrap();
    let ratio = cert.c0[1] / cert.c0[0];
    let jets = Jets::new(vec![
        JetPoint {
            z: a,
            taylor: vec![one()],
        },
        JetPoint {
            z: b,
            taylor: vec![ratio],
        },
    ]);
    let (_, rep) = extremal_disk(&phi, &psi, &Gain::Exponential { a: 0.5 }, &jets, &s).unwrap();
    assert!(rep.jet_residual < 1e-10, "{rep:?}");
    assert!(
        rep.area_rel_error() <= 1e-6 && rep.boundary_rel_error() <= 1e-6,
        "{rep:?}"
    );
}

#[test]
fn shell_limit_reaches_boundary_minimum() {
    let s = Settings::default();
    let psi = PsiSpec::single(c(0.3, 0.0), 1.0);
    let jets = Jets::value(c(0.3, 0.0), one());
    let gain = Gain::Exponential { a: 0.5 };
    let (f0, rep) = extremal_disk(&PhiSpec::zero(), &psi, &gain, &jets, &s).unwrap();
    let lim = shell_limit(&f0, &PhiSpec::zero(), &psi, &gain, &[0.9, 0.99, 0.999], &s).unwrap();
    assert_relative_eq!(lim.extrapolated, rep.hardy, max_relative = 1e-4);
}

#[test]
fn saitoh_disk_and_annulus() {
    let s = Settings::default();
    let r = saitoh_gap(Domain::Disk, zero(), &s).unwrap();
    assert_relative_eq!(r.k_hat, 1.0, max_relative = 1e-10);
    assert_relative_eq!(r.pi_b, 1.0, max_relative = 1e-10);
    assert!(r.gap.abs() <= r.error_estimate.max(1e-9));
    let r = saitoh_gap(Domain::Disk, c(0.5, 0.0), &s).unwrap();
    assert!(r.gap.abs() <= 1e-6 * r.k_hat, "{r:?}");
    let r = saitoh_gap(Domain::annulus(0.25).unwrap(), c(0.5, 0.0), &s).unwrap();
    assert!(r.gap > 10.0 * r.error_estimate, "{r:?}");
}

#[test]
fn extension_bound_examples() {
    let s = fast();
    let lam = HarmonicExtension::zero(Domain::Disk);
    let r = extension_bound(Domain::Disk, &[zero()], &[0], &[one()], &lam, &s).unwrap();
    assert_relative_eq!(r.m_h, 1.0, max_relative = 1e-10);
    assert_relative_eq!(r.rhs_derived, 1.0, max_relative = 1e-14);
    assert_relative_eq!(r.rhs_printed, 2.0, max_relative = 1e-14);
    assert_eq!(r.derived, Verdict::Equality);
    assert_eq!(r.printed, Verdict::Strict);
    let r = extension_bound(Domain::Disk, &[zero()], &[1], &[one()], &lam, &s).unwrap();
    assert_relative_eq!(r.m_h, 0.5, max_relative = 1e-10);
    assert_relative_eq!(r.rhs_derived, 0.5, max_relative = 1e-14);
    let r = extension_bound(
        Domain::Disk,
        &[zero(), c(0.5, 0.0)],
        &[0, 0],
        &[one(), one()],
        &lam,
        &Settings::default(),
    )
    .unwrap();
    assert_relative_eq!(r.t[0], 4.0, max_relative = 1e-13);
    assert_relative_eq!(r.t[1], 4.0, max_relative = 1e-13);
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.derived, Verdict::Strict);
}

#[test]
fn extension_bound_with_weight() {
    let u = HarmonicExtension::from_fn(Domain::Disk, 64, |_, th| 0.4 * th.cos()).unwrap();
    let r = extension_bound(Domain::Disk, &[c(0.2, 0.0)], &[0], &[one()], &u, &fast()).unwrap();
    assert_relative_eq!(r.lambda[0], (0.08f64).exp(), max_relative = 1e-13);
    // one point, log λ harmonic: equality with the derived constant
    assert_eq!(r.derived, Verdict::Equality, "{r:?}");
    assert_relative_eq!(r.alpha[0], -0.08, epsilon = 1e-13);
}

#[test]
fn uniform_extension_constants() {
    let s = fast();
    let r = uniform_jet_extension(Domain::Disk, &[zero()], &[0], 10, 7, &s).unwrap();
    assert_relative_eq!(r.c_hat, 1.0, max_relative = 1e-10);
    assert_relative_eq!(r.c_sup, 1.0, max_relative = 1e-10);
    assert!(r.homogeneity_defect <= 1e-12);
    let r = uniform_jet_extension(Domain::Disk, &[c(0.3, 0.0), c(-0.2, 0.4)], &[1, 1], 20, 11, &s).unwrap();
    assert!(r.c_hat.is_finite() && r.c_hat <= r.c_sup * (1.0 + 1e-10), "{r:?}");
    assert!(matches!(
        uniform_jet_extension(Domain::Disk, &[zero()], &[0], 5, 1, &s),
        Err(Error::InvalidInput(_))
    ));
}
