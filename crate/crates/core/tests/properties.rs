use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twoparam_entropy::counterexamples::{direction_fraction, normalizer_b_directional_limit};
use twoparam_entropy::maxent::stationarity_value;
use twoparam_entropy::verify::{additivity_sides, check_maximality, random_joint, sample_simplex};
use twoparam_entropy::*;

fn weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 6 => 1e-6..1.0f64], 1..=max_len)
        .prop_filter("some mass", |w| w.iter().any(|&x| x > 0.0))
}

fn dist(max_len: usize) -> impl Strategy<Value = Distribution> {
    weights(max_len).prop_map(|w| Distribution::renormalized(w).unwrap())
}

/// Off-diagonal pairs from either half of the region.
fn region_pair() -> impl Strategy<Value = ParamPair> {
    (1.0..6.0f64, 0.0..=1.0f64, any::<bool>())
        .prop_map(|(a, b, flip)| {
            let p = ParamPair::new(a, b);
            if flip { p.swapped() } else { p }
        })
        .prop_filter("region, off diagonal", |p| region_contains(*p) && !p.is_diagonal())
}

/// `(κ1, κ2)` with `κ2 ≤ 0 ≤ κ1` (or swapped) and `κ1 + κ2 + 1 > 0`, so both
/// `Λ` and the stationarity map are monotone.
fn monotone_kappas() -> impl Strategy<Value = KappaPair> {
    (0.01..0.9f64, -0.9..-0.01f64, any::<bool>())
        .prop_filter("stationarity monotone", |&(k1, k2, _)| k1 + k2 + 1.0 - k1 * (k1 + 1.0) / (k1 - k2) > 0.05)
        .prop_map(|(k1, k2, flip)| if flip { KappaPair::new(k2, k1) } else { KappaPair::new(k1, k2) })
}

fn canon() -> Normalizer {
    canonical_normalizer(1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn entropy_is_permutation_invariant(d in dist(12), pair in region_pair(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut probs = d.probs().to_vec();
        probs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled = Distribution::new(probs).unwrap();
        prop_assert_eq!(entropy(&d, pair, &canon()).unwrap(), entropy(&shuffled, pair, &canon()).unwrap());
    }

    #[test]
    fn entropy_is_non_negative(d in dist(16), pair in region_pair(), k in 0.1..10.0f64) {
        let s = entropy(&d, pair, &canonical_normalizer(k).unwrap()).unwrap();
        prop_assert!(s >= 0.0, "{}", s);
    }

    #[test]
    fn certain_outcome_has_zero_entropy(n in 1usize..20, pair in region_pair()) {
        let d = Distribution::certain(n, n / 2).unwrap();
        prop_assert_eq!(entropy(&d, pair, &canon()).unwrap(), 0.0);
    }

    #[test]
    fn uniform_matches_closed_form(n in 2usize..=64, pair in region_pair(), k in 0.1..10.0f64) {
        let norm = canonical_normalizer(k).unwrap();
        let s = entropy(&Distribution::uniform(n).unwrap(), pair, &norm).unwrap();
        let nf = n as f64;
        let closed = (nf.powf(1.0 - pair.alpha) - nf.powf(1.0 - pair.beta)) / norm.eval(pair);
        prop_assert!((s - closed).abs() <= 1e-12 * closed.abs().max(1.0), "{} vs {}", s, closed);
    }

    #[test]
    fn uniform_is_the_maximum(n in 2usize..=8, pair in region_pair(), seed in any::<u64>()) {
        let r = check_maximality(pair, &canon(), n, 50, seed).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn expanding_by_zero_is_exact(d in dist(12), pair in region_pair()) {
        prop_assert_eq!(entropy(&d, pair, &canon()).unwrap(), entropy(&d.expanded(), pair, &canon()).unwrap());
    }

    #[test]
    fn additivity_identity_holds(seed in any::<u64>(), pair in region_pair()) {
        let joint: JointDistribution = random_joint(&mut ChaCha8Rng::seed_from_u64(seed), 6, 6);
        let (_, _, residual) = additivity_sides(&joint, pair, &canon()).unwrap();
        prop_assert!(residual <= 1e-12, "{:e}", residual);
    }

    #[test]
    fn canonical_normalizer_is_antisymmetric(pair in region_pair(), k in 0.1..10.0f64) {
        let norm = canonical_normalizer(k).unwrap();
        prop_assert_eq!(norm.eval(pair), -norm.eval(pair.swapped()));
        prop_assert_eq!(norm.eval(pair).signum(), (pair.beta - pair.alpha).signum());
    }

    #[test]
    fn anisotropic_normalizer_sign_and_bracket(pair in region_pair(), k in 0.1..10.0f64) {
        let norm = normalizer_b(k).unwrap();
        let c = norm.eval(pair);
        prop_assert_eq!(c.signum(), (pair.beta - pair.alpha).signum());
        prop_assert!((c + norm.eval(pair.swapped())).abs() <= 1e-12 * c.abs().max(1.0));
        let bracket = direction_fraction(pair.alpha, pair.beta) - 1.0;
        prop_assert!((-1.5..=-0.5).contains(&bracket), "{}", bracket);
    }

    #[test]
    fn anisotropic_directional_limit(m in -5.0..0.0f64, k in 0.1..10.0f64) {
        let scan = directional_limit_scan(&normalizer_b(k).unwrap(), m, &[1e-3, 1e-6]).unwrap();
        prop_assert!((scan.limit_estimate - normalizer_b_directional_limit(m, k)).abs() <= 1e-9);
    }

    #[test]
    fn weierstrass_stays_bounded(x in -50.0..50.0f64) {
        let wp = WeierstrassParams::default();
        prop_assert!(weierstrass(x, &wp).abs() <= wp.sup() + wp.truncation_tol());
    }

    #[test]
    fn weierstrass_is_even_and_two_periodic(j in -40_000i32..40_000) {
        // dyadic arguments keep x + 2 exact
        let x = j as f64 / 4096.0;
        let wp = WeierstrassParams::default();
        let w = weierstrass(x, &wp);
        prop_assert_eq!(w, weierstrass(-x, &wp));
        prop_assert!((w - weierstrass(x + 2.0, &wp)).abs() <= 1e-12);
    }

    #[test]
    fn lambda_normalization_is_exact(k1 in -3.0..3.0f64, k2 in -3.0..3.0f64) {
        prop_assume!(k1 != k2);
        let kp = KappaPair::new(k1, k2);
        prop_assert_eq!(lambda(1.0, kp).unwrap(), 0.0);
        prop_assert_eq!(lambda_prime(1.0, kp).unwrap(), 1.0);
    }

    #[test]
    fn lambda_is_symmetric_in_kappas(x in 1e-6..100.0f64, kp in monotone_kappas()) {
        let swapped = KappaPair::new(kp.kappa2, kp.kappa1);
        let a = lambda(x, kp).unwrap();
        prop_assert!((a - lambda(x, swapped).unwrap()).abs() <= 1e-13 * a.abs().max(1.0));
    }

    #[test]
    fn gen_exp_inverts_lambda(x in 1e-6..10.0f64, kp in monotone_kappas()) {
        let y = lambda(x, kp).unwrap();
        let back = gen_exp(y, kp, Some(10.0)).unwrap();
        prop_assert!((back - x).abs() <= 1e-10 * x.max(1.0), "{} vs {}", back, x);
        prop_assert!((lambda(back, kp).unwrap() - y).abs() <= 1e-12 * y.abs().max(1.0));
    }

    #[test]
    fn stationarity_inverse_round_trip(p in 1e-4..=1.0f64, kp in monotone_kappas()) {
        let y = stationarity_value(p, kp).unwrap();
        let back = stationarity_inverse(y, kp).unwrap();
        prop_assert!((stationarity_value(back, kp).unwrap() - y).abs() <= 1e-12 * y.abs().max(1.0));
    }

    #[test]
    fn deformed_entropy_matches_mapping(d in dist(12), k1 in 0.0..3.0f64, k2 in -1.0..=0.0f64, flip in any::<bool>()) {
        let kp = if flip { KappaPair::new(k2, k1) } else { KappaPair::new(k1, k2) };
        let pair = kp.to_params();
        prop_assume!(region_contains(pair) && !pair.is_diagonal());
        let a = deformed_entropy_from_log(&d, kp).unwrap();
        let b = entropy(&d, pair, &canon()).unwrap();
        prop_assert!((a - b).abs() <= 1e-14, "{} vs {}", a, b);
        let back = KappaPair::from_params(pair);
        prop_assert!((back.kappa1 - kp.kappa1).abs() <= 1e-15 && (back.kappa2 - kp.kappa2).abs() <= 1e-15);
    }

    #[test]
    fn canonical_solution_is_feasible_and_maximal(
        energies in prop::collection::vec(-5.0..5.0f64, 3..6),
        frac in 0.05..0.95f64,
        kp in monotone_kappas(),
    ) {
        let lo = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assume!(hi - lo > 0.1);
        let problem = MaxentProblem::new(energies, lo + frac * (hi - lo), kp, 1e-10).unwrap();
        let s = solve_canonical(&problem).unwrap();
        prop_assert!(s.residuals.0 <= problem.tol && s.residuals.1 <= problem.tol);
        prop_assert!(s.dist.probs().iter().all(|&p| p >= 0.0));
        let v = verify_maximum(&s, &problem, 200, 1e-3, 7);
        prop_assert!(v.passed(), "{}", v);
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>(), n in 2usize..6) {
        let pair = ParamPair::new(2.0, 0.5);
        let a = check_maximality(pair, &canon(), n, 20, seed).unwrap();
        let b = check_maximality(pair, &canon(), n, 20, seed).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        let d1: Distribution = sample_simplex(&mut r1, n);
        let d2: Distribution = sample_simplex(&mut r2, n);
        prop_assert_eq!(d1, d2);
    }
}
