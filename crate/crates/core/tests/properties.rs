use std::f64::consts::{PI, TAU};

use minl2::analysis::theorem1_relation;
use minl2::geometry::{blaschke, log_capacity, Component, Domain, Green, HarmonicExtension};
use minl2::minimizers::*;
use minl2::polydisc::{shilov_min, Factor, IdealSpec, ProductDomain};
use minl2::quadrature::{integrate_area, Region};
use minl2::weights::{Gain, PhiSpec, PsiSpec};
use minl2::C64;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small() -> Settings {
    Settings {
        schedule: vec![8, 16, 32],
        ..Settings::default()
    }
}

fn polar(r: f64, th: f64) -> C64 {
    C64::from_polar(r, th)
}

fn domain_of(q: f64) -> Domain {
    if q == 0.0 {
        Domain::Disk
    } else {
        Domain::annulus(q).unwrap()
    }
}

/// Interior point at relative radius `s ∈ (0,1)` between the circles.
fn interior(d: Domain, s: f64, th: f64) -> C64 {
    let q = d.inner_radius();
    polar(q + (1.0 - q) * s, th)
}

fn domains() -> impl Strategy<Value = Domain> {
    prop_oneof![Just(0.0), 0.15f64..0.5].prop_map(domain_of)
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn green_is_symmetric(d in domains(), s1 in 0.05f64..0.95, t1 in 0.0..TAU, s2 in 0.05f64..0.95, t2 in 0.0..TAU) {
        let (z, w) = (interior(d, s1, t1), interior(d, s2, t2));
        prop_assume!((z - w).norm() > 1e-3);
        let g = Green::new(d);
        let (a, b) = (g.value(z, w).unwrap(), g.value(w, z).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} {b}");
    }

    #[test]
    fn blaschke_modulus_is_exp_green(r0 in 0.0f64..0.95, t0 in 0.0..TAU, r in 0.0f64..0.99, t in 0.0..TAU) {
        let (z0, z) = (polar(r0, t0), polar(r, t));
        prop_assume!((z - z0).norm() > 1e-6);
        let b = blaschke(z0).unwrap().eval(z).norm();
        let g = Green::new(Domain::Disk).value(z, z0).unwrap().exp();
        prop_assert!((b - g).abs() <= 1e-12);
    }

    #[test]
    fn disk_capacity_identity(r in 0.0f64..=0.9, t in 0.0..TAU) {
        let z = polar(r, t);
        let c = log_capacity(Domain::Disk, z).unwrap();
        prop_assert!((c * (1.0 - r * r) - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn disk_psi_vanishes_on_boundary(r in 0.0f64..0.9, t in 0.0..TAU, p in 0.1f64..3.0, th in 0.0..TAU) {
        let g = Green::new(Domain::Disk);
        let psi = PsiSpec::single(polar(r, t), p);
        prop_assert!(psi.eval(&g, polar(1.0, th)).abs() <= 1e-10);
    }

    #[test]
    fn gain_tail_strictly_decreasing(a in 0.05f64..0.95, t1 in 0.0f64..8.0, dt in 1e-3f64..4.0) {
        for gain in [Gain::Constant1, Gain::Exponential { a }] {
            prop_assert!(gain.tail(t1) > gain.tail(t1 + dt));
        }
    }

    #[test]
    fn sublevel_integrals_are_nested(d in domains(), s in 0.2f64..0.8, th in 0.0..TAU, seed in any::<u64>(), t1 in 0.0f64..2.0, dt in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coef: Vec<C64> = (0..4).map(|_| random_c(&mut rng)).collect();
        let f = move |z: C64| coef.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * z + a).norm_sqr();
        let g = Green::new(d);
        let psi = PsiSpec::single(interior(d, s, th), 1.0);
        let grid = small().area_grid(d);
        let i1 = integrate_area(&Region::sublevel(grid, |z| psi.eval(&g, z), t1).nodes(), f.clone());
        let i2 = integrate_area(&Region::sublevel(grid, |z| psi.eval(&g, z), t1 + dt).nodes(), f);
        prop_assert!(i2 <= i1 * (1.0 + 1e-14), "{i1} {i2}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn quadratic_homogeneity(d in domains(), s in 0.2f64..0.8, th in 0.0..TAU, lr in -2.0f64..2.0, li in -2.0f64..2.0) {
        let lam = C64::new(lr, li);
        prop_assume!(lam.norm() > 1e-2);
        let g = Green::new(d);
        let z = interior(d, s, th);
        let psi = PsiSpec::single(z, 2.0);
        let jets = Jets::taylor(z, vec![C64::new(1.0, 0.0), C64::new(0.3, -0.2)]);
        let st = small();
        let a = bergman_min(&g, &PhiSpec::zero(), &psi, &Gain::Constant1, &jets, 0.0, &st).unwrap();
        let b = bergman_min(&g, &PhiSpec::zero(), &psi, &Gain::Constant1, &jets.scaled(lam), 0.0, &st).unwrap();
        prop_assert!((b.value - lam.norm_sqr() * a.value).abs() <= 1e-10 * b.value, "{} {}", a.value, b.value);
        let h = hardy_min(&g, &PhiSpec::zero(), &psi, &jets, &st).unwrap();
        let k = hardy_min(&g, &PhiSpec::zero(), &psi, &jets.scaled(lam), &st).unwrap();
        prop_assert!((k.value - lam.norm_sqr() * h.value).abs() <= 1e-10 * k.value);
    }

    #[test]
    fn monotone_in_degree(d in domains(), s in 0.1f64..0.9, th in 0.0..TAU, n in 4usize..24) {
        let g = Green::new(d);
        let z = interior(d, s, th);
        let st = Settings { schedule: vec![n, n + 8], rel_tol: 0.0, ..Settings::default() };
        let jets = Jets::value(z, C64::new(1.0, 0.0));
        let psi = PsiSpec::single(z, 1.0);
        let h = hardy_min(&g, &PhiSpec::zero(), &psi, &jets, &st).unwrap();
        let b = bergman_min(&g, &PhiSpec::zero(), &psi, &Gain::Constant1, &jets, 0.0, &st).unwrap();
        for m in [h, b] {
            prop_assert_eq!(m.history.len(), 2);
            prop_assert!(m.history[1].1 <= m.history[0].1 + 1e-12, "{:?}", m.history);
        }
    }

    #[test]
    fn uniqueness_under_basis_permutation(d in domains(), s in 0.1f64..0.9, th in 0.0..TAU, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = interior(d, s, th);
        let st = small();
        let pts: Vec<(C64, f64)> = Region::full(st.area_grid(d)).nodes().iter().map(|n| (n.z, n.weight)).collect();
        let kind = match d {
            Domain::Disk => BasisKind::Monomial { center: C64::new(0.0, 0.0), radius: 1.0 },
            Domain::Annulus { q } => BasisKind::Laurent { r_out: 1.0, r_in: q },
        };
        let jets = Jets::taylor(z, vec![random_c(&mut rng), random_c(&mut rng)]);
        let solve = |basis: &Basis| {
            let g = assemble_gram(basis, &pts).unwrap();
            let rows = basis.taylor_rows(z, 1);
            let a = DMatrix::from_fn(2, basis.len(), |i, j| rows[i][j]);
            least_norm_solve(&g, &a, &DVector::from_vec(jets.rhs()), 16).unwrap()
        };
        let natural = Basis::new(kind, 16);
        let mut perm: Vec<usize> = (0..natural.len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, (rng.random::<f64>() * (i + 1) as f64) as usize % (i + 1));
        }
        let permuted = natural.clone().permuted(perm);
        let (a, b) = (solve(&natural), solve(&permuted));
        prop_assert!((a.value - b.value).abs() <= 1e-10 * a.value, "{} {}", a.value, b.value);
        for k in 0..20 {
            let w = interior(d, 0.05 + 0.9 * k as f64 / 19.0, 0.7 * k as f64);
            let (fa, fb) = (natural.eval(a.coeffs.as_slice(), w), permuted.eval(b.coeffs.as_slice(), w));
            prop_assert!((fa - fb).norm() <= 1e-8 * (1.0 + fa.norm()), "{fa} {fb}");
        }
    }

    #[test]
    fn pythagoras_over_feasible_alternatives(d in domains(), s in 0.1f64..0.9, th in 0.0..TAU, seed in any::<u64>(), boundary in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Green::new(d);
        let z = interior(d, s, th);
        let psi = PsiSpec::single(z, 2.0);
        let jets = Jets::taylor(z, vec![random_c(&mut rng), random_c(&mut rng)]);
        let st = small();
        let m = if boundary {
            hardy_min(&g, &PhiSpec::zero(), &psi, &jets, &st).unwrap()
        } else {
            bergman_min(&g, &PhiSpec::zero(), &psi, &Gain::Constant1, &jets, 0.0, &st).unwrap()
        };
        let n = m.coefficients.len();
        let pinv = m.rows.clone().pseudo_inverse(1e-300).unwrap();
        let c = DVector::from_column_slice(&m.coefficients);
        for _ in 0..10 {
            let v = DVector::from_fn(n, |_, _| random_c(&mut rng));
            let dir = &v - &pinv * (&m.rows * &v);
            let alt = &c + dir;
            let total = m.norm_of(alt.as_slice());
            let diff = quadratic_form(&m.gram, &(&alt - &c));
            prop_assert!((total - m.value - diff).abs() <= 1e-8 * total, "{total} {} {diff}", m.value);
            prop_assert!(orthogonality_residual(&m, alt.as_slice()).unwrap() <= 1e-8);
        }
    }

    #[test]
    fn shilov_product_splits(d1 in domains(), d2 in domains(), s1 in 0.1f64..0.9, s2 in 0.1f64..0.9, a in -0.5f64..0.5, th in 0.0..TAU) {
        let z1 = interior(d1, s1, th);
        let z2 = interior(d2, s2, -th);
        let u = HarmonicExtension::from_fn(d1, 64, |_, t| a * t.cos()).unwrap();
        let f1 = Factor::new(d1, PsiSpec::single(z1, 1.0), PhiSpec::with_harmonic(u.clone())).unwrap();
        let f2 = Factor::new(d2, PsiSpec::single(z2, 1.0), PhiSpec::zero()).unwrap();
        let m = ProductDomain::new(vec![f1, f2]).unwrap();
        let st = Settings { schedule: vec![16, 32, 48], ..Settings::default() };
        let prod = shilov_min(&m, &IdealSpec::Maximal(vec![C64::new(1.0, 0.0)]), &st).unwrap();
        // per-factor weight e^{−φⱼ}(∂ψⱼ/∂v)⁻¹
        let one = |d: Domain, z: C64, phi: PhiSpec| {
            hardy_min(&Green::new(d), &phi, &PsiSpec::single(z, 1.0), &Jets::value(z, C64::new(1.0, 0.0)), &st).unwrap().value
        };
        let m1 = one(d1, z1, PhiSpec::with_harmonic(u));
        let m2 = one(d2, z2, PhiSpec::zero());
        prop_assert!((prod.value - m1 * m2).abs() <= 1e-10 * prod.value, "{} {}", prod.value, m1 * m2);
    }

    #[test]
    fn theorem1_inequality_with_random_harmonic_weight(d in domains(), s in 0.2f64..0.6, th in 0.0..TAU, a in -0.4f64..0.4, b in -0.4f64..0.4) {
        let g = Green::new(d);
        let z = interior(d, s, th);
        let u = HarmonicExtension::from_fn(d, 64, |c, t| match c {
            Component::Outer => a * t.cos() + b * (2.0 * t).sin(),
            Component::Inner => b * t.sin(),
        })
        .unwrap();
        let psi = PsiSpec::single(z, 1.0);
        let rep = theorem1_relation(&g, &PhiSpec::with_harmonic(u), &psi, &Gain::Constant1, &Jets::value(z, C64::new(1.0, 0.0)), &Settings::default()).unwrap();
        prop_assert!(rep.converged, "{rep:?}");
        prop_assert!(rep.gap >= -1e-6 * rep.bound, "{rep:?}");
        prop_assert!(rep.m.is_finite() && rep.m > 0.0 && rep.m < PI * 1e6);
    }
}
