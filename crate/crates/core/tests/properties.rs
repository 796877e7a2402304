use std::f64::consts::TAU;

use curvlab::bounds::{bessel_j_zero, report};
use curvlab::curvature::petrunin_pi_mc;
use curvlab::curves::{arm_check, bow_check, random_arm_instance, random_bounded_curve, total_curvature};
use curvlab::designs::is_degree4_design;
use curvlab::{
    curv_dir, fundamental_data, jet2, jet2_fd, normal_curvature_at, petrunin_pi, rng, CurvatureOptions, Design,
    ImmersionSpec, Jet2, PolyCurve,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn random_jet(seed: u64, n: usize, extra: usize) -> Jet2 {
    let mut r = rng::rng(seed);
    let big = n + extra;
    let mut v = || r.random_range(-1.0..1.0);
    let mut jac = DMatrix::from_fn(big, n, |_, _| v());
    for k in 0..n {
        jac[(k, k)] += 3.0;
    }
    let mut hess = vec![DVector::zeros(big); n * n];
    for i in 0..n {
        for j in 0..=i {
            let h = DVector::from_fn(big, |_, _| v());
            hess[i * n + j] = h.clone();
            hess[j * n + i] = h;
        }
    }
    Jet2 { point: DVector::from_fn(big, |_, _| v()), jac, hess }
}

fn random_rotation(seed: u64, n: usize) -> DMatrix<f64> {
    let mut r = rng::rng(seed);
    let m = DMatrix::from_fn(n, n, |_, _| r.random_range(-1.0..1.0));
    m.qr().q()
}

/// `Σ w_i (p_i·y)⁴ − 3|y|⁴ Σ w_i / (n(n+2))`.
fn quartic_defect(d: &Design, y: &DVector<f64>) -> f64 {
    let n = d.n as f64;
    let total: f64 = d.weights.iter().sum();
    let lhs: f64 = d.points.iter().zip(&d.weights).map(|(p, w)| w * p.dot(y).powi(4)).sum();
    lhs - 3.0 * y.norm_squared().powi(2) * total / (n * (n + 2.0))
}

fn catalog(which: usize) -> ImmersionSpec {
    match which {
        0 => ImmersionSpec::sphere(2, 1.5),
        1 => ImmersionSpec::clifford(3),
        2 => ImmersionSpec::veronese(2),
        _ => ImmersionSpec::tube(1.0, 1, 1, 0.4),
    }
}

fn fast_opts() -> CurvatureOptions {
    CurvatureOptions { grid_density: 2_000, random_directions: 5_000, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_polygons_turn_at_least_a_full_circle(seed in any::<u64>(), dim in 2usize..=5, k in 3usize..=12) {
        let mut r = rng::rng(seed);
        let pts = (0..k).map(|_| rng::unit_vector(&mut r, dim) * r.random_range(0.2..2.0)).collect();
        let total = total_curvature(&PolyCurve::new(pts, true).unwrap(), 1e-9).unwrap().total;
        prop_assert!(total >= TAU - 1e-9, "total {total}");
    }

    #[test]
    fn maximum_dominates_every_direction(seed in any::<u64>(), n in 2usize..=4, extra in 1usize..=3) {
        let fd = fundamental_data(&random_jet(seed, n, extra)).unwrap();
        let best = normal_curvature_at(&fd, &fast_opts()).unwrap().value;
        let mut r = rng::rng(seed ^ 0xABC);
        for _ in 0..50 {
            let tau = rng::unit_vector(&mut r, n);
            prop_assert!(curv_dir(&fd, tau.as_slice()).unwrap() <= best + 1e-9);
        }
    }

    #[test]
    fn average_square_is_below_max_square(seed in any::<u64>(), n in 2usize..=4, extra in 1usize..=3) {
        let fd = fundamental_data(&random_jet(seed, n, extra)).unwrap();
        let best = normal_curvature_at(&fd, &fast_opts()).unwrap().value;
        prop_assert!(petrunin_pi(&fd) <= best * best * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn monte_carlo_average_matches_closed_form(seed in any::<u64>(), n in 2usize..=4, extra in 1usize..=3) {
        let fd = fundamental_data(&random_jet(seed, n, extra)).unwrap();
        let (exact, mc) = (petrunin_pi(&fd), petrunin_pi_mc(&fd, 40_000, seed).unwrap());
        prop_assert!((mc - exact).abs() <= 0.05 * exact, "{mc} vs {exact}");
    }

    #[test]
    fn ambient_rotation_preserves_directional_curvature(seed in any::<u64>(), n in 2usize..=3, extra in 1usize..=3) {
        let j = random_jet(seed, n, extra);
        let q = random_rotation(seed.wrapping_add(1), n + extra);
        let rotated = Jet2 {
            point: &q * &j.point,
            jac: &q * &j.jac,
            hess: j.hess.iter().map(|h| &q * h).collect(),
        };
        let (a, b) = (fundamental_data(&j).unwrap(), fundamental_data(&rotated).unwrap());
        let mut r = rng::rng(seed ^ 7);
        for _ in 0..10 {
            let tau = rng::unit_vector(&mut r, n);
            let (x, y) = (curv_dir(&a, tau.as_slice()).unwrap(), curv_dir(&b, tau.as_slice()).unwrap());
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x));
        }
    }

    #[test]
    fn sphere_curvature_scales_inversely(n in 1usize..=3, radius in 0.1f64..10.0, seed in any::<u64>()) {
        let spec = ImmersionSpec::sphere(n, radius);
        let u = spec.sample_parameter(&mut rng::rng(seed));
        let fd = fundamental_data(&jet2(&spec, &u).unwrap()).unwrap();
        let c = normal_curvature_at(&fd, &fast_opts()).unwrap().value;
        prop_assert!((c * radius - 1.0).abs() < 1e-9, "curv {c} at R {radius}");
    }

    #[test]
    fn analytic_jet_matches_finite_differences(which in 0usize..4, seed in any::<u64>()) {
        let spec = catalog(which);
        let u = spec.sample_parameter(&mut rng::rng(seed));
        prop_assume!(spec.chart_margin(&u) > 0.05);
        let (a, b) = (jet2(&spec, &u).unwrap(), jet2_fd(&spec, &u, 1e-4).unwrap());
        prop_assert!((&a.point - &b.point).amax() < 1e-12);
        prop_assert!((&a.jac - &b.jac).amax() < 1e-6);
        for (x, y) in a.hess.iter().zip(&b.hess) {
            prop_assert!((x - y).amax() < 1e-4);
        }
    }

    #[test]
    fn quartic_defect_transforms_with_rotation(n in 2usize..=5, seed in any::<u64>()) {
        let d = Design::cross_polytope(n).unwrap();
        let q = random_rotation(seed, n);
        let rotated = d.rotated(&q).unwrap();
        let y = rng::unit_vector(&mut rng::rng(seed ^ 3), n);
        let (a, b) = (quartic_defect(&rotated, &y), quartic_defect(&d, &(q.transpose() * &y)));
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!(is_degree4_design(&d, 1e-10).unwrap().residual > 1e-3);
    }

    #[test]
    fn polygons_stay_designs_under_rotation(k in 5usize..=12, seed in any::<u64>()) {
        let q = random_rotation(seed, 2);
        prop_assert!(is_degree4_design(&Design::regular_polygon(k).unwrap().rotated(&q).unwrap(), 1e-10).unwrap().ok);
    }

    #[test]
    fn arm_lemma_on_generated_instances(seed in any::<u64>(), k in 4usize..=10, dim in 2usize..=5) {
        let (p, q) = random_arm_instance(k, dim, seed).unwrap();
        let rep = arm_check(&q, &p, 1e-9).unwrap();
        prop_assert!(rep.hypotheses_ok);
        prop_assert!(rep.slack >= -1e-9);
    }

    #[test]
    fn bow_inequality_on_generated_curves(seed in any::<u64>(), radius in 0.5f64..2.0, frac in 0.05f64..1.0, dim in 2usize..=4) {
        let y = random_bounded_curve(radius, TAU * radius * frac, 300, dim, seed).unwrap();
        let rep = bow_check(&y, radius, 1e-9).unwrap();
        prop_assert_eq!(rep.chord_ok, Some(true));
    }

    #[test]
    fn bessel_zero_increases_with_order(nu in -0.5f64..30.0, step in 0.01f64..3.0) {
        let (a, b) = (bessel_j_zero(nu).unwrap(), bessel_j_zero(nu + step).unwrap());
        prop_assert!(a < b);
        prop_assert!(a > nu.max(0.0));
    }

    #[test]
    fn lower_bounds_never_exceed_compatible_constructions(n in 1usize..=64) {
        let rep = report(n, n).unwrap();
        prop_assert!(rep.ok(), "{:?}", rep.violations);
    }
}
