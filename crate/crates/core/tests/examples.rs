use approx::assert_abs_diff_eq;

use twoparam_entropy::counterexamples::normalizer_b_directional_limit;
use twoparam_entropy::deformed_log::symmetric_kappa_path;
use twoparam_entropy::scalar::decades;
use twoparam_entropy::verify::{
    axis_derivatives, check_normalizer_properties, check_shannon_limit, default_limit_paths, default_property_grid,
};
use twoparam_entropy::*;

fn canon(k: f64) -> Normalizer {
    canonical_normalizer(k).unwrap()
}

#[test]
fn region_membership() {
    assert!(region_contains(ParamPair::new(1.0, 1.0)));
    assert!(!region_contains(ParamPair::new(1.0, 0.0)));
    assert!(!region_contains(ParamPair::new(0.0, 1.0)));
    assert!(!region_contains(ParamPair::new(0.5, 0.5)));
    assert!(region_contains(ParamPair::new(0.5, 3.0)));
}

#[test]
fn summand_and_entropy_values() {
    let pair = ParamPair::new(2.0, 1.0);
    assert_eq!(summand(1.0, pair, &canon(1.0)).unwrap(), 0.0);
    assert_eq!(summand(0.5, pair, &canon(1.0)).unwrap(), 0.25);
    assert_eq!(summand(0.0, ParamPair::new(2.0, 0.5), &canon(1.0)).unwrap(), 0.0);
    let half = Distribution::uniform(2).unwrap();
    assert_eq!(entropy(&half, pair, &canon(1.0)).unwrap(), 0.5);
    assert_eq!(entropy(&Distribution::certain(1, 0).unwrap(), ParamPair::new(3.0, 0.2), &canon(1.0)).unwrap(), 0.0);
    assert_eq!(shannon_entropy(&half, 1.0), std::f64::consts::LN_2);
    assert_abs_diff_eq!(shannon_entropy(&Distribution::uniform(7).unwrap(), 1.0), 7f64.ln(), epsilon = 1e-15);
}

#[test]
fn entropy_rejects_bad_parameters() {
    let d = Distribution::uniform(2).unwrap();
    assert!(matches!(entropy(&d, ParamPair::new(1.0, 1.0), &canon(1.0)), Err(Error::DegenerateParams { .. })));
    assert!(matches!(entropy(&d, ParamPair::new(0.5, 0.6), &canon(1.0)), Err(Error::Region { .. })));
    assert!(canonical_normalizer(0.0).is_err());
    assert!(Distribution::new(vec![0.5, 0.4]).is_err());
    assert!(Distribution::new(vec![1.5, -0.5]).is_err());
}

#[test]
fn canonical_ratio_is_constant() {
    let n = canon(2.0);
    assert_eq!(n.c(2.0, 1.0), -0.5);
    for path in default_limit_paths() {
        for (_, p) in path.points() {
            assert_abs_diff_eq!(n.eval(p) / (p.alpha - p.beta), -0.5, epsilon = 1e-15);
        }
    }
}

#[test]
fn lambda_values() {
    let lin = KappaPair::new(1.0, 0.0);
    assert_eq!(lambda(1.5, lin).unwrap(), 0.5);
    assert_eq!(lambda_prime(3.7, lin).unwrap(), 1.0);
    assert_abs_diff_eq!(lambda(std::f64::consts::E, KappaPair::symmetric(1e-6)).unwrap(), 1.0, epsilon = 1e-10);
    assert_eq!(lambda_prime(1.0, KappaPair::new(0.7, -0.3)).unwrap(), 1.0);
    let kp = KappaPair::new(0.3, -0.2);
    let fd = (lambda(2.0 + 1e-6, kp).unwrap() - lambda(2.0 - 1e-6, kp).unwrap()) / 2e-6;
    assert_abs_diff_eq!(fd, lambda_prime(2.0, kp).unwrap(), epsilon = 1e-6);
    assert!(matches!(lambda(0.0, kp), Err(Error::Domain(_))));
    assert!(matches!(lambda(2.0, KappaPair::new(0.1, 0.1)), Err(Error::DegenerateParams { .. })));
}

#[test]
fn classical_limit_of_lambda() {
    for x in [0.1, 1.0, 2.0, 10.0] {
        let err = (lambda(x, KappaPair::symmetric(1e-5)).unwrap() - f64::ln(x)).abs();
        assert!(err <= 1e-8, "x={x}: {err:e}");
    }
}

#[test]
fn lambda_general_is_linear_in_a() {
    let kp = KappaPair::new(0.1, -0.1);
    let e = std::f64::consts::E;
    let two = CoefficientA::new("2/(k1-k2)", |a: f64, b| 2.0 / (a - b));
    assert_abs_diff_eq!(lambda_general(e, kp, &two).unwrap(), 2.0 * lambda(e, kp).unwrap(), epsilon = 1e-14);
    assert_eq!(lambda_general(1.0, kp, &two).unwrap(), 0.0);
    let unit = CoefficientA::unit_slope();
    for x in [0.01, 0.3, 1.7, 40.0] {
        assert_abs_diff_eq!(lambda_general(x, kp, &unit).unwrap(), lambda(x, kp).unwrap(), epsilon = 1e-13);
    }
}

#[test]
fn gen_exp_values() {
    let kp = KappaPair::new(0.3, -0.2);
    assert_eq!(gen_exp(0.0, kp, None).unwrap(), 1.0);
    assert_abs_diff_eq!(gen_exp(0.5, KappaPair::new(1.0, 0.0), Some(2.0)).unwrap(), 1.5, epsilon = 1e-12);
    for x in [0.1, 0.5, 2.0, 10.0] {
        let back = gen_exp(lambda(x, kp).unwrap(), kp, Some(10.0)).unwrap();
        assert_abs_diff_eq!(back, x, epsilon = 1e-10);
    }
    assert!(matches!(gen_exp(5.0, kp, None), Err(Error::Range { .. })));
    assert!(matches!(gen_exp(-0.5, KappaPair::new(0.9, 0.1), None), Err(Error::Monotonicity { .. })));
}

#[test]
fn a_limit_reports() {
    let path = symmetric_kappa_path(-1, -8);
    let shifted = CoefficientA::new("1/(k1-k2)+1", |a: f64, b| 1.0 / (a - b) + 1.0);
    let r = check_a_limit(&shifted, &path, 1e-6);
    assert!(r.satisfied, "{r:?}");
    // the tail of a shorter path still contains 1 + 2e-6
    assert!(!check_a_limit(&shifted, &symmetric_kappa_path(-1, -6), 1e-6).satisfied);
    for (v, kp) in r.values.iter().zip(&path) {
        assert_abs_diff_eq!(*v, 1.0 + kp.gap(), epsilon = 1e-12);
    }
}

#[test]
fn deformed_entropy_values() {
    assert_eq!(deformed_entropy_from_log(&Distribution::certain(1, 0).unwrap(), KappaPair::new(0.3, -0.2)).unwrap(), 0.0);
    let half = Distribution::uniform(2).unwrap();
    assert_abs_diff_eq!(deformed_entropy_from_log(&half, KappaPair::new(1.0, 0.0)).unwrap(), 0.5, epsilon = 1e-15);
}

#[test]
fn shannon_limit_examples() {
    let half = Distribution::uniform(2).unwrap();
    let sym = LimitPath::symmetric(decades(-1, -4));
    assert!(check_shannon_limit(&half, &canon(1.0), &sym, 1.0).unwrap().passed());
    let one = Distribution::certain(1, 0).unwrap();
    let r = check_shannon_limit(&one, &canon(1.0), &sym, 1.0).unwrap();
    assert_eq!(r.max_residual, 0.0);

    let b = normalizer_b(1.0).unwrap();
    let along_axis = LimitPath::beta_fixed(ApproachSide::Positive, decades(-1, -7));
    let diagonal = LimitPath::symmetric(decades(-1, -7));
    assert!(!check_shannon_limit(&half, &b, &along_axis, 1.0).unwrap().passed());
    assert!(!check_shannon_limit(&half, &b, &diagonal, 1.0).unwrap().passed());
}

#[test]
fn property_reports_by_normalizer() {
    let grid = default_property_grid();
    let paths = default_limit_paths();
    assert!(check_normalizer_properties(&canon(1.0), &grid, &paths).passed());

    let b = check_normalizer_properties(&normalizer_b(1.0).unwrap(), &grid, &paths);
    assert_eq!(b.failures_with_prefix("I:").count(), 0);
    assert_eq!(b.failures_with_prefix("II:").count(), 0);
    assert!(b.failures_with_prefix("III':").count() > 0);
}

#[test]
fn anisotropic_scan_values() {
    let b = normalizer_b(1.0).unwrap();
    let radii = decades(-1, -6);
    let m0 = directional_limit_scan(&b, 0.0, &radii).unwrap();
    let m1 = directional_limit_scan(&b, -1.0, &radii).unwrap();
    assert_abs_diff_eq!(m0.limit_estimate, -0.5, epsilon = 1e-9);
    assert_abs_diff_eq!(m1.limit_estimate, -0.75, epsilon = 1e-9);
    assert_eq!(normalizer_b_directional_limit(-1.0, 2.0), -0.375);
    assert!(matches!(directional_limit_scan(&b, 1.0, &radii), Err(Error::DegenerateDirection)));
    assert_eq!(b.c(1.0, 1.0), 0.0);
}

#[test]
fn anisotropic_axis_derivative() {
    // along beta = 1 the bracket is -1, so C = -(alpha - 1)/(2k)
    let der = axis_derivatives(&normalizer_b(1.0).unwrap(), &decades(-1, -5));
    for &(_, d) in &der.d_alpha {
        assert_abs_diff_eq!(d, -0.5, epsilon = 1e-9);
    }
    for &(_, d) in &der.d_beta {
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-9);
    }
}

#[test]
fn entropy_limit_demo_examples() {
    let half = Distribution::uniform(2).unwrap();
    let b = normalizer_b(1.0).unwrap();
    let radii = decades(-1, -6);
    let demo = entropy_limit_failure_demo(&half, &b, &[0.0, -1.0], &radii).unwrap();
    let ln2 = std::f64::consts::LN_2;
    assert_abs_diff_eq!(demo.slopes[0].limit_estimate, 2.0 * ln2, epsilon = 1e-6);
    assert_abs_diff_eq!(demo.slopes[1].limit_estimate, 4.0 / 3.0 * ln2, epsilon = 1e-6);
    assert_abs_diff_eq!(demo.spread, 2.0 / 3.0 * ln2, epsilon = 1e-6);
    assert!(demo.shows_no_limit);

    let certain = entropy_limit_failure_demo(&Distribution::certain(1, 0).unwrap(), &b, &[0.0, -1.0], &radii).unwrap();
    assert_eq!(certain.spread, 0.0);
    assert!(!certain.shows_no_limit);
}

#[test]
fn weierstrass_values() {
    let wp = WeierstrassParams::default();
    assert_abs_diff_eq!(weierstrass(0.0, &wp), 10.0, epsilon = 1e-12);
    assert_abs_diff_eq!(weierstrass(1.0, &wp), -10.0, epsilon = 1e-12);
    let a = normalizer_a(1.0, wp).unwrap();
    assert_eq!(a.c(1.0, 0.3), 0.0);
    assert_eq!(a.c(1.0, 4.0), 0.0);
}

#[test]
fn stationarity_examples() {
    assert_abs_diff_eq!(stationarity_inverse(0.0, KappaPair::new(1.0, 0.0)).unwrap(), 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(stationarity_inverse(-1.0, KappaPair::symmetric(1e-6)).unwrap(), 1.0, epsilon = 1e-9);
}

#[test]
fn maxent_examples() {
    let kp = KappaPair::new(0.3, -0.2);
    let flat = MaxentProblem::new(vec![2.0; 5], 2.0, kp, 1e-12).unwrap();
    let s = solve_canonical(&flat).unwrap();
    assert!(s.dist.probs().iter().all(|&p| (p - 0.2).abs() <= 1e-15));

    let two = MaxentProblem::new(vec![0.0, 1.0], 0.5, kp, 1e-12).unwrap();
    let s = solve_canonical(&two).unwrap();
    assert_eq!(verify_maximum(&s, &two, 100, 1e-3, 1).trials, 0);

    let three = MaxentProblem::new(vec![0.0, 1.0, 2.0], 1.0, KappaPair::symmetric(1e-6), 1e-12).unwrap();
    let s = solve_canonical(&three).unwrap();
    for &p in s.dist.probs() {
        assert_abs_diff_eq!(p, 1.0 / 3.0, epsilon = 1e-5);
    }
    assert!(verify_maximum(&s, &three, 1000, 1e-3, 3).passed());

    // a feasible point that is not the optimum must be flagged
    let mut fake = s.clone();
    fake.dist = Distribution::new(vec![0.4, 0.2, 0.4]).unwrap();
    assert!(!verify_maximum(&fake, &three, 1000, 1e-3, 3).passed());

    assert!(MaxentProblem::new(vec![0.0, 1.0], 1.5, kp, 1e-12).is_err());
    assert!(MaxentProblem::new(vec![0.0], 0.0, kp, 1e-12).is_err());
}
