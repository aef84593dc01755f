//! The full sampled axiom suite for one normalizer.
//!
//! Every check is seeded from [`SuiteConfig::seed`], so two runs with the
//! same configuration produce identical reports in identical order.

use serde::Serialize;

use crate::entropy::{Distribution, Normalizer, ParamPair};
use crate::error::Result;
use crate::scalar::{decades, Real};
use crate::verify::{
    axis_derivatives, check_continuity_probe, check_expandability, check_maximality, check_normalizer_properties,
    check_shannon_additivity_sampled, check_shannon_limit, default_limit_paths, default_property_grid,
    region_pairs_12, rng_from_seed, sample_simplex, CheckReport, Failure,
};

/// What a suite entry checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteCheck {
    Continuity,
    Maximality,
    Additivity,
    Expandability,
    PropertyI,
    #[serde(rename = "property-ii")]
    PropertyII,
    #[serde(rename = "property-iii-prime")]
    PropertyIIIPrime,
    ShannonLimit,
    /// Finite-difference view of the original differentiability
    /// conditions; never normative.
    AxisDerivatives,
}

impl SuiteCheck {
    pub fn normative(self) -> bool {
        self != SuiteCheck::AxisDerivatives
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub check: SuiteCheck,
    pub normative: bool,
    #[serde(flatten)]
    pub report: CheckReport,
}

/// Sample sizes and the master seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random joint distributions per parameter pair.
    pub joints: usize,
    /// Simplex samples per (pair, n).
    pub maximality_trials: usize,
    pub maximality_sizes: Vec<usize>,
    /// Random distributions per pair for expandability.
    pub expand_samples: usize,
    /// Random distributions followed along every limit path.
    pub limit_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            joints: 1000,
            maximality_trials: 10_000,
            maximality_sizes: vec![2, 4, 8],
            expand_samples: 100,
            limit_samples: 3,
        }
    }
}

fn or_errored(name: &str, r: Result<CheckReport>) -> CheckReport {
    r.unwrap_or_else(|e| CheckReport::errored(name, &e))
}

fn sub_seed(seed: u64, stream: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream)
}

fn continuity_centers<T: Real>() -> Vec<ParamPair<T>> {
    [(2.0, 0.5), (0.5, 2.0), (1.5, 0.2), (3.0, 1.0), (0.3, 1.7)]
        .into_iter()
        .map(|(a, b)| ParamPair::new(T::lit(a), T::lit(b)))
        .collect()
}

/// Splits a properties report into its I, II and III′ parts by failure
/// prefix.
fn split_properties(r: CheckReport) -> Vec<(SuiteCheck, CheckReport)> {
    let part = |prefix: &str, label: &str, check: SuiteCheck| {
        let failures: Vec<Failure> = r.failures_with_prefix(prefix).cloned().collect();
        let worst = failures.iter().map(|f| f.residual).filter(|x| x.is_finite()).fold(0.0, f64::max);
        let residual = if check == SuiteCheck::PropertyI { r.max_residual.max(worst) } else { worst };
        (check, CheckReport::new(format!("property {label}"), r.trials, residual, failures))
    };
    vec![
        part("I:", "I", SuiteCheck::PropertyI),
        part("II:", "II", SuiteCheck::PropertyII),
        part("III':", "III'", SuiteCheck::PropertyIIIPrime),
    ]
}

/// Runs continuity, maximality, additivity and expandability on the
/// twelve region pairs, properties I, II and III′ on the default grid and
/// paths, the Shannon limit along every default path, and the informational
/// axis-derivative estimates.
pub fn run_axiom_suite<T: Real>(norm: &Normalizer<T>, config: &SuiteConfig) -> Vec<SuiteEntry> {
    let pairs: Vec<ParamPair<T>> = region_pairs_12();
    let mut out: Vec<(SuiteCheck, CheckReport)> = Vec::new();

    let mut rng = rng_from_seed(sub_seed(config.seed, 1));
    let probe_dists: Vec<Distribution<T>> = (0..3).map(|i| sample_simplex(&mut rng, 3 + 2 * i)).collect();
    let mut parts = Vec::new();
    for center in continuity_centers::<T>() {
        for d in &probe_dists {
            parts.push(or_errored("continuity", check_continuity_probe(d, norm, center, T::lit(1e-2), 16)));
        }
    }
    out.push((SuiteCheck::Continuity, CheckReport::merge("continuity", parts)));

    let mut parts = Vec::new();
    for (pi, &pair) in pairs.iter().enumerate() {
        for &n in &config.maximality_sizes {
            let seed = sub_seed(config.seed, 100 + (pi * 16 + n) as u64);
            parts.push(or_errored(
                "maximality",
                check_maximality(pair, norm, n, config.maximality_trials, seed),
            ));
        }
    }
    out.push((SuiteCheck::Maximality, CheckReport::merge("maximality", parts)));

    let parts = pairs.iter().map(|&pair| {
        or_errored(
            "additivity",
            check_shannon_additivity_sampled(&[pair], norm, config.joints, sub_seed(config.seed, 2)),
        )
    });
    out.push((SuiteCheck::Additivity, CheckReport::merge("additivity", parts)));

    let mut rng = rng_from_seed(sub_seed(config.seed, 3));
    let dists: Vec<Distribution<T>> = (0..config.expand_samples)
        .map(|i| sample_simplex(&mut rng, 1 + i % 8))
        .collect();
    let mut parts = Vec::new();
    for &pair in &pairs {
        for d in &dists {
            parts.push(or_errored("expandability", check_expandability(d, pair, norm)));
        }
    }
    out.push((SuiteCheck::Expandability, CheckReport::merge("expandability", parts)));

    let grid: Vec<ParamPair<T>> = default_property_grid();
    let paths = default_limit_paths::<T>();
    let mut props = check_normalizer_properties(norm, &grid, &[]);
    let limits = check_normalizer_properties(norm, &[], &paths);
    props.trials += limits.trials;
    props.failures.extend(limits.failures);
    out.extend(split_properties(props));

    let mut rng = rng_from_seed(sub_seed(config.seed, 4));
    let mut limit_dists = vec![Distribution::uniform(2).expect("n = 2")];
    limit_dists.extend((0..config.limit_samples).map(|i| sample_simplex(&mut rng, 3 + i)));
    let mut parts = Vec::new();
    for path in &paths {
        for d in &limit_dists {
            let mut r = or_errored("Shannon limit", check_shannon_limit(d, norm, path, norm.k()));
            for f in r.failures.iter_mut() {
                f.input = format!("p={:?}: {}", d.probs(), f.input);
            }
            parts.push(r);
        }
    }
    out.push((SuiteCheck::ShannonLimit, CheckReport::merge("Shannon limit", parts)));

    let hs: Vec<T> = decades(-1, -5);
    let der = axis_derivatives(norm, &hs);
    let target = -1.0 / norm.k().as_f64();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for (axis, series, want) in [("dC/dalpha", &der.d_alpha, target), ("dC/dbeta", &der.d_beta, -target)] {
        if let Some(&(h, v)) = series.last() {
            let err = (v - want).abs();
            worst = worst.max(err);
            if !(err <= 1e-4) {
                failures.push(Failure { input: format!("{axis} at h={h:e} is {v}, expected {want}"), residual: err });
            }
        }
    }
    out.push((SuiteCheck::AxisDerivatives, CheckReport::new("III/IV axis derivatives", hs.len() * 2, worst, failures)));

    out.into_iter()
        .map(|(check, report)| SuiteEntry { check, normative: check.normative(), report })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexamples::normalizer_b;
    use crate::entropy::canonical_normalizer;

    fn small() -> SuiteConfig {
        SuiteConfig { joints: 50, maximality_trials: 200, expand_samples: 10, ..SuiteConfig::default() }
    }

    #[test]
    fn canonical_passes_everything() {
        let entries = run_axiom_suite(&canonical_normalizer(1.0f64).unwrap(), &small());
        for e in &entries {
            assert!(e.report.passed(), "{} {:?}", e.report, e.report.failures.first());
        }
    }

    #[test]
    fn anisotropic_fails_only_the_limit_checks() {
        let entries = run_axiom_suite(&normalizer_b(1.0f64).unwrap(), &small());
        for e in &entries {
            let should_fail = matches!(
                e.check,
                SuiteCheck::PropertyIIIPrime | SuiteCheck::ShannonLimit | SuiteCheck::AxisDerivatives
            );
            assert_eq!(!e.report.passed(), should_fail, "{}", e.report);
        }
    }
}
