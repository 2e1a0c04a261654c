use std::f64::consts::PI;

use electrovac::geometry::{surface_gravity_limit, Dimension};
use electrovac::variational::{central_difference, euler_lagrange_density, euler_lagrange_integral};
use electrovac::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rn(n: usize, m: f64, q: f64) -> SphericalStaticData {
    rn_data(&RNParameters::new(n, m, q).unwrap())
}

fn quad() -> Quadrature {
    Quadrature::new(QuadratureConfig::default()).unwrap()
}

fn gaussian_bump(center: f64, width: f64, amp: f64) -> RadialProfile {
    RadialProfile::analytic(Interval::half_line(), move |r| {
        let x = (r - center) / width;
        let g = amp * (-x * x).exp();
        Jet::new(g, -2.0 * x * g / width, (4.0 * x * x - 2.0) * g / (width * width))
    })
}

fn bumped_potential(d: &SphericalStaticData, center: f64, amp: f64) -> SphericalStaticData {
    d.with_potential(d.potential().add(&gaussian_bump(center, 0.5, amp)))
}

fn bumped_metric(d: &SphericalStaticData, center: f64, amp: f64) -> SphericalStaticData {
    SphericalStaticData::new(
        d.dimension(),
        0.0,
        d.metric_coefficient().add(&gaussian_bump(center, 0.5, amp)),
        d.potential().clone(),
        d.field_magnitude().clone(),
    )
    .unwrap()
}

fn ann(r1: f64, r2: f64) -> Annulus {
    Annulus::new(r1, r2).unwrap()
}

#[test]
fn flat_annulus_value() {
    // outward normals: H = 2/r on r = 2 and -2/r on r = 1
    let d = flat_data(Dimension::new(3).unwrap());
    let f = evaluate_functional(&d, ann(1.0, 2.0), None, &quad()).unwrap();
    let omega = 4.0 * PI;
    let want = 2.0 * (1.0 * omega * 4.0 + (-2.0) * omega * 1.0);
    assert!((f.value - want).abs() <= 1e-12 * want);
}

#[test]
fn rn_value_stable_under_panel_doubling() {
    let d = rn(3, 1.0, 0.5);
    let coarse = evaluate_functional(&d, ann(3.0, 6.0), None, &quad()).unwrap().value;
    let fine_quad = Quadrature::new(QuadratureConfig { panels: 64, ..QuadratureConfig::default() }).unwrap();
    let fine = evaluate_functional(&d, ann(3.0, 6.0), None, &fine_quad).unwrap().value;
    assert!(coarse.is_finite());
    assert!((coarse - fine).abs() <= 1e-8 * coarse.abs().max(1.0), "{coarse} vs {fine}");
}

#[test]
fn functional_is_odd_in_v() {
    let d = rn(4, 1.0, 0.3);
    let neg = d.with_potential(d.potential().scale(-1.0));
    let a = evaluate_functional(&d, ann(2.0, 4.0), None, &quad()).unwrap().value;
    let b = evaluate_functional(&neg, ann(2.0, 4.0), None, &quad()).unwrap().value;
    assert_eq!(a, -b);
}

#[test]
fn rn_is_critical_with_second_order_convergence() {
    for mode in [PerturbationMode::Radial, PerturbationMode::Tangential, PerturbationMode::Both] {
        let d = rn(3, 1.0, 0.5);
        let pert = Perturbation::new(4.5, 1.0, mode).unwrap();
        let est = criticality_test(&d, ann(3.0, 6.0), &pert, &quad(), 1e-5).unwrap();
        let slope = est.slope.unwrap();
        assert!((slope - 2.0).abs() <= 0.2, "{mode:?}: slope {slope}");
        assert!(est.richardson.abs() <= 1e-5 * est.perturbation_norm, "{mode:?}: {}", est.richardson);
        assert!(est.critical && est.gradient_check, "{mode:?}: {est:?}");
    }
}

#[test]
fn rn_is_critical_in_higher_dimensions() {
    for (d, a, c) in [(rn(4, 1.0, 0.3), ann(2.0, 4.0), 3.0), (rn(5, 2.0, 1.0), ann(2.5, 5.0), 3.7)] {
        let pert = Perturbation::new(c, 0.8, PerturbationMode::Both).unwrap();
        let est = criticality_test(&d, a, &pert, &quad(), 1e-5).unwrap();
        assert!((est.slope.unwrap() - 2.0).abs() <= 0.2, "{est:?}");
        assert!(est.critical, "{est:?}");
    }
}

#[test]
fn non_electrostatic_data_is_not_critical() {
    let tol = 1e-5;
    for d in [bumped_potential(&rn(3, 1.0, 0.5), 4.5, 0.05), bumped_metric(&rn(3, 1.0, 0.5), 4.3, 0.05)] {
        let pert = Perturbation::new(4.5, 1.0, PerturbationMode::Both).unwrap();
        let est = criticality_test(&d, ann(3.0, 6.0), &pert, &quad(), tol).unwrap();
        assert!(est.richardson.abs() > 10.0 * est.threshold, "{est:?}");
        assert!(!est.critical);
        // the ladder settles on a nonzero limit
        let finest = est.ladder.iter().find(|s| s.epsilon == 1e-4).unwrap().derivative;
        assert!((finest - est.richardson).abs() <= 1e-3 * est.richardson.abs(), "{est:?}");
        assert!(est.ladder.iter().all(|s| s.derivative.abs() > 0.5 * est.richardson.abs()), "{est:?}");
        assert!(est.gradient_check, "{est:?}");
    }
}

#[test]
fn gradient_check_on_random_perturbations() {
    let bases = [
        (rn(3, 1.0, 0.5), ann(3.0, 6.0)),
        (bumped_potential(&rn(4, 1.0, 0.3), 3.0, 0.03), ann(2.0, 4.5)),
        (bumped_metric(&rn(5, 1.0, 0.8), 3.0, 0.04), ann(1.8, 4.5)),
    ];
    let mut rng = StdRng::seed_from_u64(2024);
    for (d, a) in &bases {
        for _ in 0..10 {
            let width = rng.gen_range(0.2..0.45) * (a.r2 - a.r1);
            let center = rng.gen_range(a.r1 + width * 1.01..a.r2 - width * 1.01);
            let mode =
                [PerturbationMode::Radial, PerturbationMode::Tangential, PerturbationMode::Both][rng.gen_range(0..3)];
            let scale = rng.gen_range(0.2..2.0);
            let pert = Perturbation::new(center, width, mode).unwrap().with_scale(scale);
            let est = criticality_test(d, *a, &pert, &quad(), 1e-5).unwrap();
            assert!(est.gradient_check, "{mode:?} c={center} w={width}: {est:?}");
            assert!(est.gradient_mismatch <= est.gradient_tolerance);
        }
    }
}

#[test]
fn euler_lagrange_density_vanishes_on_rn() {
    let pert = Perturbation::new(4.5, 1.0, PerturbationMode::Both).unwrap();
    let d = rn(3, 1.0, 0.5);
    for r in [3.6, 4.0, 4.5, 5.1] {
        assert!(euler_lagrange_density(&d, &pert, r).unwrap().abs() <= 1e-9);
    }
}

#[test]
fn conformal_direction_pairs_with_the_trace() {
    let d = bumped_potential(&rn(4, 1.0, 0.3), 3.0, 0.05);
    let pert = Perturbation::new(3.0, 1.0, PerturbationMode::Both).unwrap();
    for r in [2.3, 2.9, 3.4] {
        let el = checks::master_residual(&d, r).unwrap();
        let want = pert.bump(r).value * el.trace(d.dimension());
        assert!((euler_lagrange_density(&d, &pert, r).unwrap() - want).abs() <= 1e-14 * (1.0 + want.abs()));
    }
}

#[test]
fn flat_linear_potential_closed_form() {
    // V = r on flat R^3: Hess V = (0, 1/r), Delta V = 2/r, so EL = (-2/r, -1/r)
    let d = flat_data(Dimension::new(3).unwrap())
        .with_potential(RadialProfile::analytic(Interval::half_line(), |r| Jet::new(r, 1.0, 0.0)));
    let radial = Perturbation::new(2.0, 1.5, PerturbationMode::Radial).unwrap();
    let tangential = Perturbation::new(2.0, 1.5, PerturbationMode::Tangential).unwrap();
    for r in [1.0, 2.0, 3.0] {
        let b = radial.bump(r).value;
        assert!((euler_lagrange_density(&d, &radial, r).unwrap() + 2.0 / r * b).abs() <= 1e-14);
        assert!((euler_lagrange_density(&d, &tangential, r).unwrap() + 2.0 / r * b).abs() <= 1e-14);
    }
}

#[test]
fn zero_perturbation_is_exactly_critical() {
    let d = rn(3, 1.0, 0.5);
    let pert = Perturbation::new(4.5, 1.0, PerturbationMode::Both).unwrap().with_scale(0.0);
    assert_eq!(central_difference(&d, ann(3.0, 6.0), &pert, &quad(), 1e-3).unwrap(), 0.0);
    assert_eq!(euler_lagrange_integral(&d, ann(3.0, 6.0), &pert, &quad()).unwrap(), 0.0);
}

#[test]
fn pohozaev_identity_on_six_pairs() {
    let cases = [
        (rn(3, 1.0, 0.5), ann(3.0, 6.0)),
        (rn(4, 1.0, 0.3), ann(2.0, 4.0)),
        (rn(3, 1.0, 0.0), ann(2.5, 10.0)),
        (rn(5, 1.0, 1.0), ann(1.5, 4.0)),
        (bumped_metric(&rn(3, 1.0, 0.5), 4.0, 0.05), ann(3.0, 6.0)),
        (bumped_potential(&rn(4, 1.0, 0.3), 3.0, 0.05), ann(2.0, 4.0)),
    ];
    for (d, a) in &cases {
        let res = pohozaev_residual(d, *a, &quad()).unwrap();
        assert!(res.residual <= 1e-7, "{res:?}");
        // both sides are resolved independently
        let fine = Quadrature::new(QuadratureConfig { panels: 128, ..QuadratureConfig::default() }).unwrap();
        let res_fine = pohozaev_residual(d, *a, &fine).unwrap();
        assert!((res.lhs - res_fine.lhs).abs() <= 1e-9 * (1.0 + res.lhs.abs()));
        assert!((res.rhs - res_fine.rhs).abs() <= 1e-9 * (1.0 + res.rhs.abs()));
    }
    // the non-RN cases exercise a nonzero traceless Ricci term
    assert!(pohozaev_residual(&cases[4].0, cases[4].1, &quad()).unwrap().lhs.abs() > 1e-4);
}

#[test]
fn pohozaev_vanishes_termwise_on_flat_space() {
    let d = flat_data(Dimension::new(3).unwrap())
        .with_potential(RadialProfile::analytic(Interval::half_line(), |r| Jet::new(r * r, 2.0 * r, 2.0)));
    let res = pohozaev_residual(&d, ann(0.5, 2.0), &quad()).unwrap();
    assert_eq!((res.lhs, res.rhs, res.residual), (0.0, 0.0, 0.0));
}

#[test]
fn surface_gravity_matches_limit_of_gradient() {
    for (n, m, q) in [(3, 1.0, 0.0), (3, 1.0, 0.5), (4, 1.0, 0.3), (5, 2.0, 1.0), (3, 1.0, 1.0), (4, 0.7, 0.7)] {
        let p = RNParameters::new(n, m, q).unwrap();
        let closed = surface_gravity(&p).unwrap();
        let limit = surface_gravity_limit(&rn_data(&p), rn_horizon(&p).unwrap()).unwrap();
        assert!((closed - limit.value).abs() <= 1e-6, "{p:?}: {closed} vs {:?}", limit);
        // kappa = (n-2)(m/r_h^(n-1) - q^2/r_h^(2n-3))
        let rh = rn_horizon(&p).unwrap();
        let nf = n as f64;
        let alt = (nf - 2.0) * (m / rh.powf(nf - 1.0) - q * q / rh.powf(2.0 * nf - 3.0));
        assert!((closed - alt).abs() <= 1e-14);
    }
    assert_eq!(surface_gravity(&RNParameters::new(3, 1.0, 1.0).unwrap()).unwrap(), 0.0);
    assert!(matches!(surface_gravity(&RNParameters::new(3, 1.0, 2.0).unwrap()), Err(Error::Domain(_))));
}

#[test]
fn perturbation_amplitude_is_bounded() {
    let d = rn(3, 1.0, 0.5);
    let pert = Perturbation::new(4.5, 1.0, PerturbationMode::Radial).unwrap().with_scale(100.0);
    assert!(matches!(central_difference(&d, ann(3.0, 6.0), &pert, &quad(), 1e-2), Err(Error::Parameter(_))));
}

#[test]
fn radial_variation_of_vacuum_data_leaves_f_constant() {
    // with E = 0 the bulk term is linear in 1/A after integrating by parts,
    // and its coefficient is the vacuum criticality condition
    let quad = quad();
    for (n, r1, r2) in [(3, 3.0, 6.0), (4, 2.0, 4.0)] {
        let d = rn(n, 1.0, 0.0);
        let pert = Perturbation::new(0.5 * (r1 + r2), 0.3 * (r2 - r1), PerturbationMode::Radial).unwrap();
        let base = evaluate_functional(&d, ann(r1, r2), None, &quad).unwrap().value;
        for eps in [1e-2, 1e-3, 1e-4] {
            let diff = central_difference(&d, ann(r1, r2), &pert, &quad, eps).unwrap();
            assert!(diff.abs() <= 1e-12 * base.abs(), "n={n} eps={eps}: {diff:e}");
        }
    }
    // a charge switches the odd terms back on
    let d = rn(3, 1.0, 0.5);
    let pert = Perturbation::new(4.5, 0.9, PerturbationMode::Radial).unwrap();
    assert!(central_difference(&d, ann(3.0, 6.0), &pert, &quad, 1e-2).unwrap().abs() > 1e-8);
}
