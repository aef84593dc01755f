//! Sampled checks of the generalized Shannon–Khinchin axioms and of the
//! normalizer properties.
//!
//! Continuity and limits are probed numerically. A passing report is
//! evidence, not a proof.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::entropy::{
    checked_c, entropy, entropy_with_c, power_gap, power_sum, region_contains, shannon_entropy,
    Distribution, JointDistribution, Normalizer, ParamPair,
};
use crate::error::{Error, Result};
use crate::scalar::{decades, ordered_sum, Real};

/// Relative residual allowed in the additivity identity.
pub const ADDITIVITY_TOL: f64 = 1e-12;
/// Slack above the uniform entropy tolerated by the maximality check.
pub const MAXIMALITY_TOL: f64 = 1e-12;
/// Final error allowed against the Shannon entropy along a limit path.
pub const SHANNON_LIMIT_TOL: f64 = 1e-6;
/// Tolerance on `C/(α − β) → −1/k` and on agreement between paths.
pub const PROPERTY_LIMIT_TOL: f64 = 1e-6;
/// Largest accepted ratio `modulus(r/2) / modulus(r)` in the continuity probe.
pub const CONTINUITY_RATIO: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub input: String,
    pub residual: f64,
}

/// Result of one check. `verdict` is `Pass` iff `failures` is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub verdict: Verdict,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, trials: usize, max_residual: f64, failures: Vec<Failure>) -> Self {
        let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
        Self { name: name.into(), trials, max_residual, verdict, failures }
    }

    /// A failed report carrying an evaluation error.
    pub fn errored(name: impl Into<String>, err: &Error) -> Self {
        Self::new(
            name,
            0,
            f64::NAN,
            vec![Failure { input: format!("error: {err}"), residual: f64::NAN }],
        )
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Failures whose input descriptor starts with `prefix`.
    pub fn failures_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Failure> + 'a {
        self.failures.iter().filter(move |f| f.input.starts_with(prefix))
    }

    /// Merges reports of the same check run over several inputs.
    pub fn merge(name: impl Into<String>, parts: impl IntoIterator<Item = CheckReport>) -> Self {
        let mut trials = 0;
        let mut max_residual: f64 = 0.0;
        let mut failures = Vec::new();
        for p in parts {
            trials += p.trials;
            max_residual = if p.max_residual.is_nan() { f64::NAN } else { max_residual.max(p.max_residual) };
            failures.extend(p.failures);
        }
        Self::new(name, trials, max_residual, failures)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{v}] {} (trials={}, max_residual={:e}, failures={})",
            self.name,
            self.trials,
            self.max_residual,
            self.failures.len()
        )
    }
}

/// Which way a straight path leaves `(1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproachSide {
    /// `α = 1 + r`.
    Positive,
    /// `α = 1 − r`.
    Negative,
    /// Neither side stays in the region; the normalizer formula is
    /// evaluated outside it.
    Outside,
}

type PathFn<T> = Arc<dyn Fn(T) -> ParamPair<T> + Send + Sync>;

/// A parameterized approach `t ↦ (α(t), β(t))` to `(1, 1)` sampled at a
/// decreasing sequence of `t`.
#[derive(Clone)]
pub struct LimitPath<T> {
    name: String,
    map: PathFn<T>,
    ts: Vec<T>,
}

/// `t ∈ {1e-1, …, 1e-7}`.
pub fn default_t_ladder<T: Real>() -> Vec<T> {
    decades(-1, -7)
}

impl<T: Real> LimitPath<T> {
    pub fn custom<F>(name: impl Into<String>, ts: Vec<T>, map: F) -> Self
    where
        F: Fn(T) -> ParamPair<T> + Send + Sync + 'static,
    {
        Self { name: name.into(), map: Arc::new(map), ts }
    }

    /// `(1 + s·t, 1 + s·m·t)` with `s = ±1` chosen by `side`.
    pub fn slope(m: T, side: ApproachSide, ts: Vec<T>) -> Result<Self> {
        if m == T::one() {
            return Err(Error::DegenerateDirection);
        }
        let s = match side {
            ApproachSide::Negative => -T::one(),
            _ => T::one(),
        };
        let name = format!("slope m={m} ({side:?})");
        Ok(Self::custom(name, ts, move |t| {
            ParamPair::new(T::one() + s * t, T::one() + s * m * t)
        }))
    }

    /// `α = 1 + t`, `β = 1 − t`.
    pub fn symmetric(ts: Vec<T>) -> Self {
        Self::custom("symmetric (1+t, 1-t)", ts, |t| ParamPair::new(T::one() + t, T::one() - t))
    }

    /// `β` held at 1, `α = 1 ± t`.
    pub fn beta_fixed(side: ApproachSide, ts: Vec<T>) -> Self {
        let s = if side == ApproachSide::Negative { -T::one() } else { T::one() };
        Self::custom(format!("beta=1 ({side:?})"), ts, move |t| ParamPair::new(T::one() + s * t, T::one()))
    }

    /// `α` held at 1, `β = 1 ± t`.
    pub fn alpha_fixed(side: ApproachSide, ts: Vec<T>) -> Self {
        let s = if side == ApproachSide::Negative { -T::one() } else { T::one() };
        Self::custom(format!("alpha=1 ({side:?})"), ts, move |t| ParamPair::new(T::one(), T::one() + s * t))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ts(&self) -> &[T] {
        &self.ts
    }

    pub fn at(&self, t: T) -> ParamPair<T> {
        (self.map)(t)
    }

    pub fn points(&self) -> Vec<(T, ParamPair<T>)> {
        self.ts.iter().map(|&t| (t, self.at(t))).collect()
    }

    /// Every sampled pair lies in the region off the diagonal, and `t`
    /// strictly decreases.
    pub fn validate(&self) -> Result<()> {
        if self.ts.is_empty() || self.ts.windows(2).any(|w| !(w[1] < w[0])) || self.ts.iter().any(|t| !(*t > T::zero())) {
            return Err(Error::Domain(format!("path `{}` needs a decreasing positive t sequence", self.name)));
        }
        for (_, p) in self.points() {
            if p.is_diagonal() {
                return Err(Error::DegenerateParams { what: "alpha and beta", a: p.alpha.as_f64(), b: p.beta.as_f64() });
            }
            if !region_contains(p) {
                return Err(Error::Region { alpha: p.alpha.as_f64(), beta: p.beta.as_f64() });
            }
        }
        Ok(())
    }
}

impl<T: Real> fmt::Debug for LimitPath<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LimitPath").field("name", &self.name).field("ts", &self.ts).finish()
    }
}

/// Straight approaches to `(1,1)` that stay inside the region: slopes
/// `m ∈ {−2, −1, −1/2, 0}` from both sides plus the `α = 1` axis from both
/// sides. Positive slopes leave the region on both sides and are omitted.
pub fn default_limit_paths<T: Real>() -> Vec<LimitPath<T>> {
    let mut paths = Vec::new();
    for m in [-2.0, -1.0, -0.5] {
        for side in [ApproachSide::Positive, ApproachSide::Negative] {
            paths.push(LimitPath::slope(T::lit(m), side, default_t_ladder()).expect("m != 1"));
        }
    }
    for side in [ApproachSide::Positive, ApproachSide::Negative] {
        paths.push(LimitPath::beta_fixed(side, default_t_ladder()));
        paths.push(LimitPath::alpha_fixed(side, default_t_ladder()));
    }
    paths
}

/// Twelve off-diagonal pairs spread over both halves of the region,
/// including the `β = 0` and `α = 1` boundaries.
pub fn region_pairs_12<T: Real>() -> Vec<ParamPair<T>> {
    [
        (2.0, 0.5),
        (1.5, 1.0),
        (1.0, 0.5),
        (3.0, 0.0),
        (1.2, 0.8),
        (4.0, 0.3),
        (0.5, 2.0),
        (1.0, 1.5),
        (0.0, 3.0),
        (0.8, 1.2),
        (0.3, 1.0),
        (0.9, 5.0),
    ]
    .into_iter()
    .map(|(a, b)| ParamPair::new(T::lit(a), T::lit(b)))
    .collect()
}

/// Grid of region pairs used for the sign, antisymmetry and zero checks.
pub fn default_property_grid<T: Real>() -> Vec<ParamPair<T>> {
    let mut grid = Vec::new();
    for a in [1.0, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0] {
        for b in [0.0, 0.25, 0.5, 0.75, 0.9, 1.0] {
            let p = ParamPair::new(T::lit(a), T::lit(b));
            if region_contains(p) && !p.is_diagonal() {
                grid.push(p);
                grid.push(p.swapped());
            }
        }
    }
    grid
}

/// Uniform sample from the simplex by normalized exponential spacings.
pub fn sample_simplex<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Distribution<T> {
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    let probs: Vec<T> = w.iter().map(|x| T::lit(x / total)).collect();
    Distribution::renormalized(probs).expect("positive weights")
}

/// Random joint distribution with `1..=max_rows` rows of `1..=max_cols`
/// entries. About one entry in eight is zero and, when there are at least
/// two rows, one row in ten is entirely zero.
pub fn random_joint<T: Real, R: Rng + ?Sized>(rng: &mut R, max_rows: usize, max_cols: usize) -> JointDistribution<T> {
    loop {
        let n = rng.random_range(1..=max_rows);
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let m = rng.random_range(1..=max_cols);
                (0..m)
                    .map(|_| if rng.random_bool(0.125) { 0.0 } else { rng.random::<f64>() })
                    .collect()
            })
            .collect();
        if n >= 2 {
            for row in rows.iter_mut() {
                if rng.random_bool(0.1) {
                    row.iter_mut().for_each(|p| *p = 0.0);
                }
            }
        }
        let total: f64 = rows.iter().flatten().sum();
        if total <= 0.0 {
            continue;
        }
        let rows: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|p| T::lit(p / total)).collect()).collect();
        if let Ok(j) = JointDistribution::new(rows) {
            return j;
        }
    }
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Both sides of the additivity identity and their relative residual.
pub fn additivity_sides<T: Real>(joint: &JointDistribution<T>, pair: ParamPair<T>, norm: &Normalizer<T>) -> Result<(T, T, T)> {
    let c = checked_c(pair, norm)?;
    let s = |x: T| power_gap(x, pair) / c;
    let lhs = ordered_sum(joint.flattened().into_iter().map(s).collect());
    let marginals = joint.marginals();
    let mut rhs_terms = Vec::new();
    for (i, &pi) in marginals.iter().enumerate() {
        let Some(cond) = joint.conditional(i) else {
            continue;
        };
        let inner_s = ordered_sum(cond.iter().map(|&q| s(q)).collect());
        rhs_terms.push(pi.powf(pair.alpha) * inner_s);
        rhs_terms.push(s(pi) * power_sum(&cond, pair.beta));
    }
    let rhs = ordered_sum(rhs_terms);
    let residual = (lhs - rhs).abs() / T::one().max(lhs.abs());
    Ok((lhs, rhs, residual))
}

/// Generalized Shannon additivity on one joint distribution. Rows with
/// zero marginal are skipped on the right-hand side.
pub fn check_shannon_additivity<T: Real>(
    joint: &JointDistribution<T>,
    pair: ParamPair<T>,
    norm: &Normalizer<T>,
) -> Result<CheckReport> {
    let (_, _, residual) = additivity_sides(joint, pair, norm)?;
    let r = residual.as_f64();
    let failures = if r <= ADDITIVITY_TOL {
        Vec::new()
    } else {
        vec![Failure { input: format!("pair {pair}, joint {:?}", joint.rows()), residual: r }]
    };
    Ok(CheckReport::new(format!("additivity {pair}"), 1, r, failures))
}

/// Additivity over `count` seeded random joints for each pair.
pub fn check_shannon_additivity_sampled<T: Real>(
    pairs: &[ParamPair<T>],
    norm: &Normalizer<T>,
    count: usize,
    seed: u64,
) -> Result<CheckReport> {
    let mut rng = rng_from_seed(seed);
    let joints: Vec<JointDistribution<T>> = (0..count).map(|_| random_joint(&mut rng, 6, 6)).collect();
    let mut parts = Vec::with_capacity(count * pairs.len());
    for (ji, joint) in joints.iter().enumerate() {
        for &pair in pairs {
            let mut r = check_shannon_additivity(joint, pair, norm)?;
            for f in r.failures.iter_mut() {
                f.input = format!("joint #{ji}, {}", f.input);
            }
            parts.push(r);
        }
    }
    Ok(CheckReport::merge("additivity", parts))
}

/// Maximality at the uniform distribution over `trials` uniform simplex
/// samples.
pub fn check_maximality<T: Real>(
    pair: ParamPair<T>,
    norm: &Normalizer<T>,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::Domain(format!("maximality needs n >= 2, got {n}")));
    }
    let c = checked_c(pair, norm)?;
    let top = entropy_with_c(Distribution::<T>::uniform(n)?.probs(), pair, c);
    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    let mut max_excess = f64::NEG_INFINITY;
    for trial in 0..trials {
        let d: Distribution<T> = sample_simplex(&mut rng, n);
        let excess = (entropy_with_c(d.probs(), pair, c) - top).as_f64();
        max_excess = max_excess.max(excess);
        if excess > MAXIMALITY_TOL {
            failures.push(Failure { input: format!("trial {trial}, pair {pair}, p={:?}", d.probs()), residual: excess });
        }
    }
    Ok(CheckReport::new(
        format!("maximality {pair} n={n}"),
        trials,
        max_excess.max(0.0),
        failures,
    ))
}

/// Expandability: appending a zero outcome must not change the entropy at
/// all.
pub fn check_expandability<T: Real>(dist: &Distribution<T>, pair: ParamPair<T>, norm: &Normalizer<T>) -> Result<CheckReport> {
    let base = entropy(dist, pair, norm)?;
    let expanded = entropy(&dist.expanded(), pair, norm)?;
    let residual = (expanded - base).abs().as_f64();
    let failures = if residual == 0.0 {
        Vec::new()
    } else {
        vec![Failure { input: format!("pair {pair}, p={:?}", dist.probs()), residual }]
    };
    Ok(CheckReport::new(format!("expandability {pair}"), 1, residual, failures))
}

/// Largest entropy deviation over `samples` evenly spaced directions at
/// distance `radius` from `center`. Directions that leave the region or
/// hit the diagonal are skipped. When the entropy is undefined at the
/// center, the oscillation `max − min` is used instead.
fn continuity_modulus<T: Real>(
    dist: &Distribution<T>,
    norm: &Normalizer<T>,
    center: ParamPair<T>,
    radius: T,
    samples: usize,
) -> Result<(T, usize)> {
    let reference = entropy(dist, center, norm).ok();
    let mut values = Vec::new();
    for j in 0..samples {
        let theta = T::TAU() * T::from_usize(j).unwrap() / T::from_usize(samples).unwrap();
        let p = ParamPair::new(center.alpha + radius * theta.cos(), center.beta + radius * theta.sin());
        if p.is_diagonal() || !region_contains(p) {
            continue;
        }
        values.push(entropy(dist, p, norm)?);
    }
    if values.is_empty() {
        return Err(Error::Domain(format!("no admissible perturbation of {center} at radius {radius}")));
    }
    let modulus = match reference {
        Some(s0) => values.iter().map(|&v| (v - s0).abs()).fold(T::zero(), T::max),
        None => {
            let hi = values.iter().copied().fold(T::neg_infinity(), T::max);
            let lo = values.iter().copied().fold(T::infinity(), T::min);
            hi - lo
        }
    };
    Ok((modulus, values.len()))
}

/// Continuity probe in `(α, β)`: the local modulus must shrink by at least
/// the factor [`CONTINUITY_RATIO`] when the radius is halved. A modulus of
/// exactly zero passes.
pub fn check_continuity_probe<T: Real>(
    dist: &Distribution<T>,
    norm: &Normalizer<T>,
    center: ParamPair<T>,
    radius: T,
    samples: usize,
) -> Result<CheckReport> {
    let (outer, n1) = continuity_modulus(dist, norm, center, radius, samples)?;
    let (inner, n2) = continuity_modulus(dist, norm, center, radius / T::lit(2.0), samples)?;
    let (outer, inner) = (outer.as_f64(), inner.as_f64());
    let ratio = if outer == 0.0 { 0.0 } else { inner / outer };
    let failures = if outer == 0.0 || ratio < CONTINUITY_RATIO {
        Vec::new()
    } else {
        vec![Failure {
            input: format!("center {center}, radius {radius}: modulus {outer:e} -> {inner:e}"),
            residual: ratio,
        }]
    };
    Ok(CheckReport::new(format!("continuity probe at {center}"), n1 + n2, ratio, failures))
}

/// Entropy along `path` against `−k Σ p ln p`.
///
/// Passes iff the final error is within [`SHANNON_LIMIT_TOL`] and, once the
/// error has dropped within the tolerance, it stays there.
pub fn check_shannon_limit<T: Real>(
    dist: &Distribution<T>,
    norm: &Normalizer<T>,
    path: &LimitPath<T>,
    k: T,
) -> Result<CheckReport> {
    path.validate()?;
    let target = shannon_entropy(dist, k);
    let mut errors = Vec::with_capacity(path.ts().len());
    for (t, p) in path.points() {
        errors.push((t, (entropy(dist, p, norm)? - target).abs().as_f64()));
    }
    let entered = errors.iter().position(|&(_, e)| e <= SHANNON_LIMIT_TOL).unwrap_or(errors.len() - 1);
    let failures: Vec<Failure> = errors[entered..]
        .iter()
        .filter(|(_, e)| !(*e <= SHANNON_LIMIT_TOL))
        .map(|&(t, e)| Failure { input: format!("{} at t={t}", path.name()), residual: e })
        .collect();
    let last = errors.last().map(|e| e.1).unwrap_or(f64::NAN);
    Ok(CheckReport::new(format!("Shannon limit along {}", path.name()), errors.len(), last, failures))
}

/// Error sequence `|S(path(t)) − H(p)|` along a path, in path order.
pub fn shannon_limit_errors<T: Real>(
    dist: &Distribution<T>,
    norm: &Normalizer<T>,
    path: &LimitPath<T>,
    k: T,
) -> Result<Vec<(T, T)>> {
    let target = shannon_entropy(dist, k);
    path.points()
        .into_iter()
        .map(|(t, p)| Ok((t, (entropy(dist, p, norm)? - target).abs())))
        .collect()
}

/// `C(α,β)/(α − β)` at every point of `path`.
pub fn ratio_along_path<T: Real>(norm: &Normalizer<T>, path: &LimitPath<T>) -> Vec<(T, T)> {
    path.points()
        .into_iter()
        .map(|(t, p)| (t, norm.eval(p) / (p.alpha - p.beta)))
        .collect()
}

/// Properties I, II and III′ on a grid and a set of limit paths.
///
/// Failure descriptors start with `I:`, `II:` or `III':` so callers can tell
/// the properties apart.
pub fn check_normalizer_properties<T: Real>(
    norm: &Normalizer<T>,
    grid: &[ParamPair<T>],
    paths: &[LimitPath<T>],
) -> CheckReport {
    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut trials = 0;

    for &p in grid.iter().filter(|p| !p.is_diagonal()) {
        trials += 1;
        let c = norm.eval(p);
        let swapped = norm.eval(p.swapped());
        let expected_sign = (p.beta - p.alpha).signum();
        if c == T::zero() {
            failures.push(Failure { input: format!("II: C vanishes at {p}"), residual: 0.0 });
        } else if c.signum() != expected_sign {
            failures.push(Failure { input: format!("I: sign of C at {p} is not that of beta-alpha"), residual: c.as_f64() });
        }
        let asym = ((c + swapped).abs() / T::one().max(c.abs())).as_f64();
        max_residual = max_residual.max(asym);
        if !(asym <= 1e-12) {
            failures.push(Failure { input: format!("I: antisymmetry at {p}: C={c}, C(swapped)={swapped}"), residual: asym });
        }
    }

    let target = -T::one() / norm.k();
    let mut limits = Vec::new();
    for path in paths {
        let values = ratio_along_path(norm, path);
        trials += values.len();
        let Some(&(t, last)) = values.last() else {
            continue;
        };
        let err = (last - target).abs().as_f64();
        max_residual = max_residual.max(err);
        if !(err <= PROPERTY_LIMIT_TOL) {
            failures.push(Failure {
                input: format!("III': {} gives C/(alpha-beta)={last} at t={t}, expected {target}", path.name()),
                residual: err,
            });
        }
        limits.push((path.name().to_owned(), last));
    }
    if limits.len() >= 2 {
        let hi = limits.iter().map(|l| l.1).fold(T::neg_infinity(), T::max);
        let lo = limits.iter().map(|l| l.1).fold(T::infinity(), T::min);
        let spread = (hi - lo).as_f64();
        max_residual = max_residual.max(spread);
        if !(spread <= PROPERTY_LIMIT_TOL) {
            failures.push(Failure { input: format!("III': per-path limits disagree (range {lo} .. {hi})"), residual: spread });
        }
    }
    CheckReport::new(format!("normalizer properties I, II, III' for `{}`", norm.name()), trials, max_residual, failures)
}

/// Central-difference estimates of `dC/dα` at `(1+h, 1)` and `dC/dβ` at
/// `(1, 1+h)` for a ladder of `h`, reported as `(h, value)`.
#[derive(Debug, Clone, Serialize)]
pub struct AxisDerivatives {
    pub d_alpha: Vec<(f64, f64)>,
    pub d_beta: Vec<(f64, f64)>,
}

/// Informational estimates for the original differentiability conditions.
pub fn axis_derivatives<T: Real>(norm: &Normalizer<T>, hs: &[T]) -> AxisDerivatives {
    let ten = T::lit(10.0);
    let one = T::one();
    let fd = |f: &dyn Fn(T) -> T, x: T, h: T| (f(x + h) - f(x - h)) / (h + h);
    let mut d_alpha = Vec::new();
    let mut d_beta = Vec::new();
    for &h in hs {
        let step = h / ten;
        d_alpha.push((h.as_f64(), fd(&|a| norm.c(a, one), one + h, step).as_f64()));
        d_beta.push((h.as_f64(), fd(&|b| norm.c(one, b), one + h, step).as_f64()));
    }
    AxisDerivatives { d_alpha, d_beta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::canonical_normalizer;
    use approx::assert_relative_eq;

    fn canon() -> Normalizer<f64> {
        canonical_normalizer(1.0).unwrap()
    }

    #[test]
    fn report_verdict_tracks_failures() {
        let ok = CheckReport::new("x", 3, 0.0, vec![]);
        assert!(ok.passed());
        let bad = CheckReport::new("x", 3, 1.0, vec![Failure { input: "a".into(), residual: 1.0 }]);
        assert_eq!(bad.verdict, Verdict::Fail);
        let json = serde_json::to_string(&ok).unwrap();
        assert_eq!(json, r#"{"name":"x","trials":3,"max_residual":0.0,"verdict":"pass","failures":[]}"#);
    }

    #[test]
    fn additivity_collapses_for_single_column_rows() {
        let j = JointDistribution::new(vec![vec![0.2], vec![0.5], vec![0.3]]).unwrap();
        for pair in region_pairs_12::<f64>() {
            let (lhs, rhs, res) = additivity_sides(&j, pair, &canon()).unwrap();
            assert_eq!(res, 0.0, "{pair}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn additivity_uniform_2x2() {
        let j = JointDistribution::new(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let r = check_shannon_additivity(&j, ParamPair::new(2.0, 0.5), &canon()).unwrap();
        assert!(r.passed());
        assert!(r.max_residual <= 1e-15, "{}", r.max_residual);
    }

    #[test]
    fn additivity_propagates_errors() {
        let j = JointDistribution::new(vec![vec![1.0]]).unwrap();
        assert!(check_shannon_additivity(&j, ParamPair::new(1.0, 1.0), &canon()).is_err());
        assert!(check_shannon_additivity(&j, ParamPair::new(0.5, 0.6), &canon()).is_err());
    }

    #[test]
    fn maximality_examples() {
        let pair = ParamPair::new(2.0, 1.0);
        let n = canon();
        let u = entropy(&Distribution::<f64>::uniform(2).unwrap(), pair, &n).unwrap();
        assert_relative_eq!(u, 0.5, epsilon = 1e-16);
        let skew = entropy(&Distribution::new(vec![0.9, 0.1]).unwrap(), pair, &n).unwrap();
        assert_relative_eq!(skew, 0.18, epsilon = 1e-15);
        let point = entropy(&Distribution::<f64>::certain(5, 2).unwrap(), pair, &n).unwrap();
        assert_eq!(point, 0.0);
        let r = check_maximality(pair, &n, 2, 500, 7).unwrap();
        assert!(r.passed());
        assert_eq!(r.trials, 500);
    }

    #[test]
    fn maximality_flags_a_convex_summand() {
        // C with the wrong sign makes the summand convex and the uniform point a minimum
        let flipped = Normalizer::new("flipped", 1.0, &[], |a: f64, b| a - b).unwrap();
        let r = check_maximality(ParamPair::new(2.0, 0.5), &flipped, 3, 200, 1).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn expandability_examples() {
        let n = canon();
        for p in [vec![0.5, 0.5], vec![1.0]] {
            let d = Distribution::new(p).unwrap();
            let r = check_expandability(&d, ParamPair::new(2.0, 0.0), &n).unwrap();
            assert!(r.passed());
            assert_eq!(r.max_residual, 0.0);
        }
    }

    #[test]
    fn continuity_probe_canonical() {
        let d = Distribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        let n = canon();
        let center = ParamPair::new(2.0, 0.5);
        let (m_big, _) = continuity_modulus(&d, &n, center, 1e-2, 16).unwrap();
        let (m_small, _) = continuity_modulus(&d, &n, center, 1e-3, 16).unwrap();
        assert!(m_small < m_big);
        assert!(check_continuity_probe(&d, &n, center, 1e-2, 16).unwrap().passed());

        let certain = Distribution::new(vec![1.0]).unwrap();
        let r = check_continuity_probe(&certain, &n, center, 1e-2, 16).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn shannon_limit_canonical() {
        let d = Distribution::new(vec![0.5, 0.5]).unwrap();
        let path = LimitPath::symmetric(decades(-1, -4));
        let r = check_shannon_limit(&d, &canon(), &path, 1.0).unwrap();
        assert!(r.passed(), "{r:?}");
        let certain = Distribution::new(vec![1.0]).unwrap();
        let errs = shannon_limit_errors(&certain, &canon(), &path, 1.0).unwrap();
        assert!(errs.iter().all(|e| e.1 == 0.0));
    }

    #[test]
    fn shannon_limit_wrong_k_fails() {
        let d = Distribution::new(vec![0.5, 0.5]).unwrap();
        let path = LimitPath::symmetric(default_t_ladder());
        let r = check_shannon_limit(&d, &canon(), &path, 2.0).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn canonical_properties_hold() {
        let r = check_normalizer_properties(&canon(), &default_property_grid(), &default_limit_paths());
        assert!(r.passed(), "{r:?}");
        for path in default_limit_paths::<f64>() {
            for (_, v) in ratio_along_path(&canon(), &path) {
                assert_relative_eq!(v, -1.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn default_paths_are_valid() {
        for p in default_limit_paths::<f64>() {
            p.validate().unwrap();
        }
        let outside = LimitPath::<f64>::slope(2.0, ApproachSide::Positive, default_t_ladder()).unwrap();
        assert!(outside.validate().is_err());
        assert!(matches!(
            LimitPath::<f64>::slope(1.0, ApproachSide::Positive, default_t_ladder()),
            Err(Error::DegenerateDirection)
        ));
    }

    #[test]
    fn grid_pairs_in_region() {
        assert_eq!(region_pairs_12::<f64>().len(), 12);
        for p in region_pairs_12::<f64>().into_iter().chain(default_property_grid()) {
            assert!(region_contains(p) && !p.is_diagonal(), "{p}");
        }
    }

    #[test]
    fn canonical_axis_derivatives() {
        let d = axis_derivatives(&canonical_normalizer(2.0).unwrap(), &decades::<f64>(-1, -5));
        for (_, v) in d.d_alpha {
            assert_relative_eq!(v, -0.5, epsilon = 1e-9);
        }
        for (_, v) in d.d_beta {
            assert_relative_eq!(v, 0.5, epsilon = 1e-9);
        }
    }
}
