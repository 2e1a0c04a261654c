use electrovac::geometry::Dimension;
use electrovac::roots::{lin_space, log_space};
use electrovac::*;
use num_rational::Rational64;
use proptest::prelude::*;

fn p(n: usize, m: f64, q: f64) -> RNParameters {
    RNParameters::new(n, m, q).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Closed-form inverse of the isotropic transform: with `R = r^(n-2)`,
/// `u = s^(n-2)` solves `u^2 - (R - m) u + (m^2 - q^2)/4 = 0` on the outer branch.
fn s_of_r_oracle(p: &RNParameters, r: f64) -> f64 {
    let np = p.n.as_f64() - 2.0;
    let big = r.powf(np);
    let k = (p.m * p.m - p.q * p.q) / 4.0;
    let b = big - p.m;
    let u = 0.5 * (b + (b * b - 4.0 * k).max(0.0).sqrt());
    u.powf(1.0 / np)
}

/// Lower end of the default verification grid.
fn verification_lo(p: &RNParameters) -> f64 {
    Grid::default_for_rn(p, 2).unwrap().points()[0]
}

fn regime_samples() -> Vec<RNParameters> {
    vec![
        p(3, 1.0, 0.0),
        p(3, 1.0, 0.5),
        p(4, 1.0, 0.3),
        p(5, 2.0, -1.5),
        p(3, 1.0, 1.0),
        p(4, 0.7, -0.7),
        p(3, 1.0, 1.05),
        p(4, 0.5, 1.0),
        p(5, 1.0, 3.0),
    ]
}

#[test]
fn presentations_agree_on_log_grids() {
    for params in regime_samples() {
        let chart = IsotropicChart::new(&params);
        let area = rn_data(&params);
        // V(r) has condition number ~ 1/V at an extremal horizon, so the
        // extremal sweep starts where V ~ 1e-2
        let s_lo = if chart.s_min > 0.0 { 1.01 * chart.s_min } else { 1e-2 };
        for s in log_space(s_lo, 100.0 * s_lo.max(1.0), 1000) {
            let pt = isotropic_map(&params, s).unwrap();
            let v = area.potential().value(pt.r).unwrap();
            let e = area.field_magnitude().value(pt.r).unwrap();
            let psi = area.electric_potential().unwrap().value(pt.r).unwrap();
            assert!(rel(pt.v, v) <= 1e-10, "{params:?} s={s}: V {} vs {v}", pt.v);
            if params.q != 0.0 {
                assert!(rel(pt.emag, e) <= 1e-10, "{params:?} s={s}: |E| {} vs {e}", pt.emag);
                assert!(rel(pt.psi, psi) <= 1e-10, "{params:?} s={s}: Psi {} vs {psi}", pt.psi);
            } else {
                assert_eq!((pt.emag, pt.psi), (0.0, 0.0));
            }
        }
    }
}

#[test]
fn inverse_matches_closed_form_and_round_trips() {
    for params in regime_samples() {
        let lo = verification_lo(&params);
        for r in log_space(lo, 1e3, 200).into_iter().chain([7.3]) {
            let s = isotropic_inverse(&params, r).unwrap();
            assert!(rel(s, s_of_r_oracle(&params, r)) <= 1e-10, "{params:?} r={r}");
            let back = isotropic_map(&params, s).unwrap().r;
            assert!(rel(back, r) <= 1e-10, "{params:?} r={r}: {back}");
        }
    }
}

#[test]
fn schwarzschild_horizon_in_isotropic_radius() {
    let params = p(3, 1.0, 0.0);
    assert!((isotropic_map(&params, 0.5).unwrap().r - 2.0).abs() < 1e-15);
    assert_eq!(isotropic_inverse(&params, 2.0).unwrap(), 0.5);
    assert!((s_of_r_oracle(&params, 2.0) - 0.5).abs() < 1e-15);
}

#[test]
fn outer_branch_is_increasing() {
    for params in regime_samples() {
        let chart = IsotropicChart::new(&params);
        let s_lo = if chart.s_min > 0.0 { chart.s_min * (1.0 + 1e-6) } else { 1e-4 };
        let rs: Vec<f64> = log_space(s_lo, 50.0, 500).iter().map(|&s| chart.r_of_s(s).unwrap()).collect();
        assert!(rs.windows(2).all(|w| w[0] < w[1]), "{params:?}");
        for s in log_space(s_lo, 50.0, 50) {
            let pt = chart.point(s).unwrap();
            // dr/ds = phi + s phi'
            assert!(pt.phi + s * pt.dphi > 0.0);
        }
    }
}

#[test]
fn asymptotic_flatness_of_transform() {
    for params in regime_samples() {
        let pt = isotropic_map(&params, 1e8).unwrap();
        assert!((pt.r / pt.s - 1.0).abs() < 1e-7);
    }
}

fn rat(x: f64) -> Rational64 {
    Rational64::approximate_float(x).unwrap()
}

/// The three-dimensional phi identity in exact arithmetic, `C_3 = 1`:
/// `P = (1 + a)(1 + b)`, `V = (1 - ab)/P`, `Psi = q/(s P)`, and
/// `((V + 1)^2 - Psi^2)/4 = 1/P`.
#[test]
fn phi_identity_in_rational_arithmetic() {
    for (m, q, s) in [(1.0, 0.0, 1.0), (1.0, 0.5, 0.9), (2.0, -1.5, 3.0), (1.0, 1.25, 0.75)] {
        let (mr, qr, sr) = (rat(m), rat(q), rat(s));
        let two = Rational64::from_integer(2);
        let one = Rational64::from_integer(1);
        let a = (mr + qr) / (two * sr);
        let b = (mr - qr) / (two * sr);
        let big_p = (one + a) * (one + b);
        let v = (one - a * b) / big_p;
        let psi = qr / (sr * big_p);
        let rhs = ((v + one) * (v + one) - psi * psi) / Rational64::from_integer(4);
        assert_eq!(rhs.recip(), big_p, "m={m} q={q} s={s}");

        let params = p(3, m, q);
        let pt = isotropic_map(&params, s).unwrap();
        let exact = *big_p.numer() as f64 / *big_p.denom() as f64;
        assert!(rel(pt.phi, exact) <= 1e-15);
        assert!(phi_identity_residual(&params, s).unwrap() <= 1e-12);
    }
}

#[test]
fn phi_identity_in_higher_dimension() {
    for n in 3..=6 {
        for params in [p(n, 1.0, 0.3), p(n, 1.0, 0.9), p(n, 1.0, 1.4)] {
            let chart = IsotropicChart::new(&params);
            let s_lo = if chart.s_min > 0.0 { 1.01 * chart.s_min } else { 1e-3 };
            for s in log_space(s_lo, 100.0, 300) {
                assert!(phi_identity_residual(&params, s).unwrap() <= 1e-10, "{params:?} s={s}");
            }
        }
    }
}

#[test]
fn r0_agrees_with_sign_scan_of_v_squared() {
    for params in regime_samples() {
        let grid = lin_space(1e-3, 10.0, 20001);
        let v2: Vec<f64> = grid.iter().map(|&r| params.potential_squared(r).value).collect();
        // largest grid point where V^2 <= 0
        let last_nonpositive = grid.iter().zip(&v2).filter(|(_, &w)| w <= 0.0).map(|(&r, _)| r).next_back();
        match rn_horizon(&params) {
            None => {
                assert!(v2.iter().all(|&w| w > 0.0), "{params:?}");
                assert_eq!(rn_r0(&params), 0.0);
            }
            Some(rh) => {
                assert_eq!(rn_r0(&params), rh);
                if params.regime() == Regime::SubExtremal {
                    let r = last_nonpositive.unwrap();
                    assert!(r <= rh && rh - r <= 1e-3 * 1.0001, "{params:?}: {r} vs {rh}");
                } else {
                    // double zero: V^2 >= 0 everywhere, minimum at r_h
                    assert!(v2.iter().all(|&w| w >= -1e-15));
                }
            }
        }
    }
}

#[test]
fn super_extremal_quadratic_has_no_positive_root() {
    // u^2 - 2mu + q^2 with m < |q| has negative discriminant
    for params in [p(3, 1.0, 1.05), p(4, 0.5, 1.0), p(5, 0.1, -0.2)] {
        assert_eq!(params.regime(), Regime::SuperExtremal);
        assert!(params.m * params.m - params.q * params.q < 0.0);
        assert!(rn_horizon(&params).is_none());
    }
}

#[test]
fn ball_example_area_and_residuals() {
    for v in [[0.0, 0.0, 1.0], [1.0, -2.0, 0.5]] {
        let rep = euclidean_ball_residuals(&BallStaticExample::new(v).unwrap()).unwrap();
        assert!(rep.residuals.passed());
        assert_eq!(rep.sigma_area, std::f64::consts::PI);
    }
}

#[test]
fn flat_data_is_trivial() {
    let d = flat_data(Dimension::new(4).unwrap());
    assert_eq!(d.field_norm_sq(3.0).unwrap(), 0.0);
    assert_eq!(d.potential().value(3.0).unwrap(), 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dictionary_invariant(n in 3usize..=6, m in 0.1f64..3.0, q in -3.0f64..3.0, t in 1.02f64..50.0) {
        let params = p(n, m, q);
        let d = rn_data(&params);
        let lo = Grid::default_for_rn(&params, 2).unwrap().points()[0] / 1.01;
        let r = lo * t;
        let psi = d.electric_potential().unwrap().jet(r).unwrap();
        let a = d.metric_coefficient().value(r).unwrap();
        let v = d.potential().value(r).unwrap();
        let e = d.field_magnitude().value(r).unwrap();
        prop_assert!((psi.d1.abs() / (a.sqrt() * v) - e).abs() <= 1e-12 * (1.0 + e));
    }

    #[test]
    fn isotropic_round_trip(n in 3usize..=6, m in 0.1f64..3.0, q in -3.0f64..3.0, t in 1.001f64..100.0) {
        let params = p(n, m, q);
        let r = verification_lo(&params) * t;
        let s = isotropic_inverse(&params, r).unwrap();
        prop_assert!(rel(isotropic_map(&params, s).unwrap().r, r) <= 1e-10);
    }
}
