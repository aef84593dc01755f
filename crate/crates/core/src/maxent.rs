//! Canonical distribution of the deformed trace-form entropy
//! `S(p) = −Σ p_i Λ(p_i)` at fixed normalization and mean energy.
//!
//! # Stationarity
//!
//! With multipliers `g` (normalization) and `l` (energy), the Lagrangian
//! `S(p) − g(Σp − 1) − l(Σpε − U)` is stationary where
//!
//! ```text
//! μ(p_i) = g + l·ε_i,    μ(p) = d/dp [−p Λ(p)] = −Λ(p) − p Λ'(p).
//! ```
//!
//! When `μ` is strictly decreasing on `(0, 1]` every level `g + l·ε_i` has
//! at most one preimage, and the canonical distribution is
//! `p_i = μ⁻¹(g + l·ε_i)`: the generalized-exponential representation with
//! `μ⁻¹` playing the role of the inverse logarithm. This reduction is our
//! own; the solver never assumes a closed form for `μ⁻¹`.
//!
//! Levels at or below `μ(1) = −1` map to `p = 1`; levels above the
//! supremum of `μ` map to `p = 0`. Components that end up below
//! [`PIN_THRESHOLD`] are pinned to zero and the remaining support is
//! re-solved.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::deformed_log::{
    check_monotone_grid, deformed_entropy_unchecked, extend_lower_bracket, inversion_tol, polish_tol, KappaPair,
};
use crate::entropy::Distribution;
use crate::error::{Error, Result};
use crate::roots::invert_monotone;
use crate::scalar::Real;
use crate::verify::{rng_from_seed, CheckReport, Failure};

/// Components below this are treated as exactly zero.
pub const PIN_THRESHOLD: f64 = 1e-9;
/// Outer iteration budget.
pub const MAX_OUTER_STEPS: usize = 200;
/// Step halvings allowed per damped Newton step.
pub const MAX_HALVINGS: usize = 30;
/// Relative step of the central-difference Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-7;
/// Largest entropy increase tolerated by [`verify_maximum`].
pub const MAXIMALITY_SLACK: f64 = 1e-10;

/// Energies, target mean energy, deformation and residual tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxentProblem<T> {
    pub energies: Vec<T>,
    pub target_mean: T,
    pub kp: KappaPair<T>,
    pub tol: T,
}

impl<T: Real> MaxentProblem<T> {
    pub fn new(energies: Vec<T>, target_mean: T, kp: KappaPair<T>, tol: T) -> Result<Self> {
        let p = Self { energies, target_mean, kp, tol };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.energies.len() < 2 {
            return Err(Error::Domain(format!("need at least 2 energy levels, got {}", self.energies.len())));
        }
        if self.energies.iter().any(|e| !e.is_finite()) || !self.target_mean.is_finite() {
            return Err(Error::Domain("energies and target mean must be finite".into()));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.kp.kappa1 == self.kp.kappa2 {
            return Err(Error::DegenerateParams {
                what: "kappa1 and kappa2",
                a: self.kp.kappa1.as_f64(),
                b: self.kp.kappa2.as_f64(),
            });
        }
        let (lo, hi) = self.energy_range();
        let u = self.target_mean;
        let ok = if lo == hi { u == lo } else { u > lo && u < hi };
        if !ok {
            return Err(Error::Domain(format!(
                "target mean {u} must lie strictly between min energy {lo} and max energy {hi}"
            )));
        }
        Ok(())
    }

    fn energy_range(&self) -> (T, T) {
        let lo = self.energies.iter().copied().fold(T::infinity(), T::min);
        let hi = self.energies.iter().copied().fold(T::neg_infinity(), T::max);
        (lo, hi)
    }
}

/// Which route produced the multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Symmetric,
    Newton,
    NestedBisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalSolution<T> {
    /// Sums to one within the problem tolerance.
    pub dist: Distribution<T>,
    pub multiplier_energy: T,
    pub multiplier_norm: T,
    /// `(|Σp − 1|, |Σpε − U|)`.
    pub residuals: (T, T),
    pub entropy_value: T,
    pub iterations: usize,
    pub method: SolveMethod,
}

/// `μ(p) = −Λ(p) − pΛ'(p)` and its derivative, evaluated without
/// cancellation as `κ1 − κ2 → 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StationarityMap<T> {
    kp: KappaPair<T>,
    d: T,
}

impl<T: Real> StationarityMap<T> {
    pub(crate) fn new(kp: KappaPair<T>) -> Result<Self> {
        let d = kp.gap();
        if d == T::zero() || !d.is_finite() {
            return Err(Error::DegenerateParams { what: "kappa1 and kappa2", a: kp.kappa1.as_f64(), b: kp.kappa2.as_f64() });
        }
        Ok(Self { kp, d })
    }

    #[inline]
    fn ratio(&self, p: T) -> T {
        (self.d * p.ln()).exp_m1() / self.d
    }

    pub(crate) fn value(&self, p: T) -> T {
        let one = T::one();
        -p.powf(self.kp.kappa2) * (one + (self.kp.kappa1 + one) * self.ratio(p))
    }

    pub(crate) fn derivative(&self, p: T) -> T {
        let one = T::one();
        let (k1, k2) = (self.kp.kappa1, self.kp.kappa2);
        -p.powf(k2 - one) * ((k1 + k2 + one) + k1 * (k1 + one) * self.ratio(p))
    }

    /// Strictly decreasing on the pre-check grid over `(1e-12, 1]`.
    pub(crate) fn validate(&self) -> Result<()> {
        check_monotone_grid(|p| self.derivative(p), T::one(), false)
    }

    /// Inverse on `(0, 1]` without the grid check.
    pub(crate) fn inverse(&self, y: T) -> Result<T> {
        let f = |p: T| self.value(p);
        let bottom = f(T::one());
        if y < bottom {
            return Err(Error::Range { y: y.as_f64(), lo: bottom.as_f64(), hi: f64::INFINITY });
        }
        let lo = extend_lower_bracket(f, y, false, T::one())?;
        let tol = inversion_tol(y);
        let inv = invert_monotone(f, |p| self.derivative(p), y, lo, T::one(), polish_tol(y));
        if inv.residual > tol {
            return Err(Error::NoConvergence {
                iterations: inv.iterations,
                residual: inv.residual.as_f64(),
                trace: vec![format!("stationarity inverse of {y} stalled at p={}", inv.x)],
            });
        }
        Ok(inv.x)
    }

    /// Inverse extended by `1` below `μ(1)` and `0` above the range.
    fn clamped_inverse(&self, y: T) -> T {
        if y <= self.value(T::one()) {
            return T::one();
        }
        match self.inverse(y) {
            Ok(p) => p,
            Err(Error::Range { .. }) => T::zero(),
            Err(_) => T::nan(),
        }
    }
}

/// The unique `p ∈ (0, 1]` with `μ(p) = y`, where `μ(p) = −Λ(p) − pΛ'(p)`.
pub fn stationarity_inverse<T: Real>(y: T, kp: KappaPair<T>) -> Result<T> {
    let map = StationarityMap::new(kp)?;
    map.validate()?;
    map.inverse(y)
}

/// `μ(p) = −Λ(p) − pΛ'(p)`.
pub fn stationarity_value<T: Real>(p: T, kp: KappaPair<T>) -> Result<T> {
    if !(p > T::zero() && p <= T::one()) {
        return Err(Error::Domain(format!("stationarity map is defined on (0, 1], got {p}")));
    }
    Ok(StationarityMap::new(kp)?.value(p))
}

struct Reduced<'a, T> {
    map: StationarityMap<T>,
    energies: &'a [T],
    target: T,
}

impl<T: Real> Reduced<'_, T> {
    fn probs(&self, g: T, l: T) -> Vec<T> {
        self.energies.iter().map(|&e| self.map.clamped_inverse(g + l * e)).collect()
    }

    fn residual(&self, g: T, l: T) -> (T, T) {
        let p = self.probs(g, l);
        let total = p.iter().fold(T::zero(), |a, &b| a + b);
        let mean = p.iter().zip(self.energies).fold(T::zero(), |a, (&pi, &e)| a + pi * e);
        (total - T::one(), mean - self.target)
    }

    fn norm(r: (T, T)) -> T {
        r.0.abs().max(r.1.abs())
    }
}

/// Classical Gibbs multipliers `(g, l)` with `p_i = exp(−1 − g − l·ε_i)`.
fn gibbs_start<T: Real>(energies: &[T], target: T) -> (T, T) {
    let lo = energies.iter().copied().fold(T::infinity(), T::min);
    let hi = energies.iter().copied().fold(T::neg_infinity(), T::max);
    let spread = hi - lo;
    let mean_at = |l: T| {
        let w: Vec<T> = energies.iter().map(|&e| (-l * (e - lo)).exp()).collect();
        let z = w.iter().fold(T::zero(), |a, &b| a + b);
        w.iter().zip(energies).fold(T::zero(), |a, (&wi, &e)| a + wi * e) / z
    };
    let mut a = -T::one() / spread;
    let mut b = T::one() / spread;
    for _ in 0..60 {
        if mean_at(a) >= target {
            break;
        }
        a = a + a;
    }
    for _ in 0..60 {
        if mean_at(b) <= target {
            break;
        }
        b = b + b;
    }
    for _ in 0..200 {
        let mid = (a + b) / T::lit(2.0);
        if mid <= a || mid >= b {
            break;
        }
        if mean_at(mid) > target {
            a = mid;
        } else {
            b = mid;
        }
    }
    let l = (a + b) / T::lit(2.0);
    let z = energies.iter().fold(T::zero(), |acc, &e| acc + (-l * (e - lo)).exp());
    let g = z.ln() - l * lo - T::one();
    (g, l)
}

fn solve_2x2<T: Real>(j: [[T; 2]; 2], r: (T, T)) -> Option<(T, T)> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det == T::zero() || !det.is_finite() {
        return None;
    }
    Some(((j[1][1] * r.0 - j[0][1] * r.1) / det, (j[0][0] * r.1 - j[1][0] * r.0) / det))
}

/// On failure returns the smallest residual norm reached.
fn newton<T: Real>(sys: &Reduced<'_, T>, start: (T, T), tol: T, trace: &mut Vec<String>) -> std::result::Result<((T, T), usize), T> {
    let (mut g, mut l) = start;
    let mut r = sys.residual(g, l);
    let mut polish = 0;
    for it in 1..=MAX_OUTER_STEPS {
        let rn = Reduced::<T>::norm(r);
        if rn <= tol {
            // a few extra steps drive the residual to rounding level
            polish += 1;
            if polish > 3 || rn == T::zero() {
                return Ok(((g, l), it));
            }
        }
        let hg = T::lit(JACOBIAN_STEP) * T::one().max(g.abs());
        let hl = T::lit(JACOBIAN_STEP) * T::one().max(l.abs());
        let (rg1, rg0) = (sys.residual(g + hg, l), sys.residual(g - hg, l));
        let (rl1, rl0) = (sys.residual(g, l + hl), sys.residual(g, l - hl));
        let jac = [
            [(rg1.0 - rg0.0) / (hg + hg), (rl1.0 - rl0.0) / (hl + hl)],
            [(rg1.1 - rg0.1) / (hg + hg), (rl1.1 - rl0.1) / (hl + hl)],
        ];
        let Some((dg, dl)) = solve_2x2(jac, r) else {
            trace.push(format!("newton step {it}: singular jacobian at g={g}, l={l}"));
            return Err(rn);
        };
        let mut scale = T::one();
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let (ng, nl) = (g - scale * dg, l - scale * dl);
            let nr = sys.residual(ng, nl);
            if Reduced::<T>::norm(nr) < rn {
                g = ng;
                l = nl;
                r = nr;
                accepted = true;
                break;
            }
            scale = scale / T::lit(2.0);
        }
        trace.push(format!("newton step {it}: residual {}", Reduced::<T>::norm(r)));
        if !accepted {
            return if rn <= tol { Ok(((g, l), it)) } else { Err(rn) };
        }
    }
    let rn = Reduced::<T>::norm(r);
    if rn <= tol {
        Ok(((g, l), MAX_OUTER_STEPS))
    } else {
        Err(rn)
    }
}

/// `g` with `Σ p_i(g, l) = 1`; the sum decreases in `g`.
fn normalizing_g<T: Real>(sys: &Reduced<'_, T>, l: T) -> T {
    let total = |g: T| sys.probs(g, l).into_iter().fold(T::zero(), |a, b| a + b);
    let top_level = sys.energies.iter().map(|&e| l * e).fold(T::neg_infinity(), T::max);
    // every level at or below μ(1) = −1 gives p = 1
    let mut a = -T::one() - top_level;
    let mut step = T::one();
    let mut b = a + step;
    while total(b) > T::one() {
        step = step + step;
        b = a + step;
        if !b.is_finite() {
            break;
        }
    }
    for _ in 0..300 {
        let mid = (a + b) / T::lit(2.0);
        if mid <= a || mid >= b {
            break;
        }
        if total(mid) > T::one() {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a + b) / T::lit(2.0)
}

fn nested_bisection<T: Real>(
    sys: &Reduced<'_, T>,
    start_l: T,
    tol: T,
    trace: &mut Vec<String>,
) -> std::result::Result<((T, T), usize), T> {
    let lo = sys.energies.iter().copied().fold(T::infinity(), T::min);
    let hi = sys.energies.iter().copied().fold(T::neg_infinity(), T::max);
    let width = T::one() / (hi - lo);
    let mean = |l: T| {
        let g = normalizing_g(sys, l);
        (g, sys.residual(g, l).1)
    };
    // mean energy decreases in l
    let mut a = start_l - width;
    let mut b = start_l + width;
    let mut grow = width;
    for _ in 0..80 {
        if mean(a).1 >= T::zero() {
            break;
        }
        grow = grow + grow;
        a = start_l - grow;
    }
    grow = width;
    for _ in 0..80 {
        if mean(b).1 <= T::zero() {
            break;
        }
        grow = grow + grow;
        b = start_l + grow;
    }
    let mut iterations = 0;
    let mut best = Err(T::infinity());
    for it in 1..=MAX_OUTER_STEPS {
        iterations = it;
        let mid = (a + b) / T::lit(2.0);
        let (g, r) = mean(mid);
        let rn = Reduced::<T>::norm(sys.residual(g, mid));
        if rn <= tol {
            best = Ok(((g, mid), it));
            break;
        }
        if let Err(b) = best {
            best = Err(b.min(rn));
        }
        if mid <= a || mid >= b {
            break;
        }
        if r > T::zero() {
            a = mid;
        } else {
            b = mid;
        }
    }
    trace.push(format!("nested bisection: {iterations} outer steps, bracket [{a}, {b}]"));
    best
}

fn solve_support<T: Real>(
    map: StationarityMap<T>,
    energies: &[T],
    target: T,
    tol: T,
    trace: &mut Vec<String>,
) -> Result<((T, T), usize, SolveMethod)> {
    let sys = Reduced { map, energies, target };
    let lo = energies.iter().copied().fold(T::infinity(), T::min);
    let hi = energies.iter().copied().fold(T::neg_infinity(), T::max);
    if lo == hi {
        let n = T::from_usize(energies.len()).unwrap();
        return Ok(((map.value(T::one() / n), T::zero()), 0, SolveMethod::Symmetric));
    }
    let start = gibbs_start(energies, target);
    trace.push(format!("gibbs start g={}, l={}", start.0, start.1));
    let newton_best = match newton(&sys, start, tol, trace) {
        Ok((gl, it)) => return Ok((gl, it, SolveMethod::Newton)),
        Err(r) => r,
    };
    let bisection_best = match nested_bisection(&sys, start.1, tol, trace) {
        Ok((gl, it)) => return Ok((gl, it, SolveMethod::NestedBisection)),
        Err(r) => r,
    };
    Err(Error::NoConvergence {
        iterations: MAX_OUTER_STEPS,
        residual: newton_best.min(bisection_best).as_f64(),
        trace: std::mem::take(trace),
    })
}

/// Maximizes `−Σ p_i Λ(p_i)` subject to `Σ p_i = 1` and `Σ p_i ε_i = U`.
///
/// Multipliers start from the classical Gibbs solution and are refined by
/// damped Newton steps on the two constraints (central-difference
/// Jacobian); nested bisection is the fallback.
pub fn solve_canonical<T: Real>(problem: &MaxentProblem<T>) -> Result<CanonicalSolution<T>> {
    problem.validate()?;
    let map = StationarityMap::new(problem.kp)?;
    map.validate()?;

    let n = problem.energies.len();
    let mut active: Vec<usize> = (0..n).collect();
    let mut trace = Vec::new();
    let mut total_iterations = 0;
    loop {
        let energies: Vec<T> = active.iter().map(|&i| problem.energies[i]).collect();
        let ((g, l), it, method) = solve_support(map, &energies, problem.target_mean, problem.tol, &mut trace)?;
        total_iterations += it;

        let mut probs = vec![T::zero(); n];
        let share = T::one() / T::from_usize(active.len()).unwrap();
        for (&i, &e) in active.iter().zip(&energies) {
            probs[i] = if method == SolveMethod::Symmetric { share } else { map.clamped_inverse(g + l * e) };
        }
        let pinned: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&i| probs[i] < T::lit(PIN_THRESHOLD))
            .collect();
        let remaining: Vec<usize> = active.iter().copied().filter(|i| !pinned.contains(i)).collect();
        if !pinned.is_empty() && remaining.len() >= 2 && remaining.len() < active.len() {
            trace.push(format!("pinning {} component(s) to zero", pinned.len()));
            active = remaining;
            continue;
        }

        for &i in &pinned {
            probs[i] = T::zero();
        }
        let total = probs.iter().fold(T::zero(), |a, &b| a + b);
        let mean = probs
            .iter()
            .zip(&problem.energies)
            .fold(T::zero(), |a, (&p, &e)| a + p * e);
        let residuals = ((total - T::one()).abs(), (mean - problem.target_mean).abs());
        if !(residuals.0 <= problem.tol && residuals.1 <= problem.tol) {
            trace.push(format!("final residuals {} / {}", residuals.0, residuals.1));
            return Err(Error::NoConvergence {
                iterations: total_iterations,
                residual: residuals.0.max(residuals.1).as_f64(),
                trace,
            });
        }
        let entropy_value = deformed_entropy_unchecked(&probs, problem.kp, problem.kp.gap());
        return Ok(CanonicalSolution {
            dist: Distribution::from_trusted(probs),
            multiplier_energy: l,
            multiplier_norm: g,
            residuals,
            entropy_value,
            iterations: total_iterations,
            method,
        });
    }
}

/// Orthonormal basis of span{1, ε}.
fn constraint_basis<T: Real>(energies: &[T]) -> Vec<Vec<T>> {
    let n = energies.len();
    let nf = T::from_usize(n).unwrap();
    let ones: Vec<T> = vec![T::one() / nf.sqrt(); n];
    let mean = energies.iter().fold(T::zero(), |a, &b| a + b) / nf;
    let centered: Vec<T> = energies.iter().map(|&e| e - mean).collect();
    let norm = centered.iter().fold(T::zero(), |a, &b| a + b * b).sqrt();
    let mut basis = vec![ones];
    if norm > T::zero() {
        basis.push(centered.into_iter().map(|c| c / norm).collect());
    }
    basis
}

/// Random feasibility-preserving perturbations of `solution`: directions in
/// the null space of both constraint gradients, of length `step`, shortened
/// when needed to keep every `p_i ≥ 0`. Fails if any perturbation raises the
/// entropy by more than [`MAXIMALITY_SLACK`].
pub fn verify_maximum<T: Real>(
    solution: &CanonicalSolution<T>,
    problem: &MaxentProblem<T>,
    trials: usize,
    step: T,
    seed: u64,
) -> CheckReport {
    let name = "maxent local maximality";
    let n = problem.energies.len();
    let basis = constraint_basis(&problem.energies);
    if basis.len() >= n {
        return CheckReport::new(name, 0, 0.0, Vec::new());
    }
    let kp = problem.kp;
    let p = solution.dist.probs();
    let base = deformed_entropy_unchecked(p, kp, kp.gap());
    let mut rng = rng_from_seed(seed);
    let mut failures = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    let mut done = 0;
    for trial in 0..trials {
        let mut d: Vec<T> = (0..n).map(|_| T::lit(rng.sample::<f64, _>(StandardNormal))).collect();
        for b in &basis {
            let dot = d.iter().zip(b).fold(T::zero(), |a, (&x, &y)| a + x * y);
            d.iter_mut().zip(b).for_each(|(x, &y)| *x = *x - dot * y);
        }
        let len = d.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        if len == T::zero() {
            continue;
        }
        let mut scale = step / len;
        for (&pi, &di) in p.iter().zip(&d) {
            if di < T::zero() {
                scale = scale.min(pi / -di);
            }
        }
        let moved: Vec<T> = p.iter().zip(&d).map(|(&pi, &di)| (pi + scale * di).max(T::zero())).collect();
        let gain = (deformed_entropy_unchecked(&moved, kp, kp.gap()) - base).as_f64();
        worst = worst.max(gain);
        done += 1;
        if gain > MAXIMALITY_SLACK {
            failures.push(Failure { input: format!("trial {trial}: entropy increased"), residual: gain });
        }
    }
    CheckReport::new(name, done, if done == 0 { 0.0 } else { worst }, failures)
}
