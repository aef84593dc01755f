//! Two-parameter deformed logarithm
//!
//! ```text
//! Λ(x) = (x^κ1 − x^κ2) / (κ1 − κ2)
//! ```
//!
//! its derivative, the generalized exponential `E = Λ⁻¹` (by numerical
//! inversion) and the coefficient-limit condition `A(κ1,κ2)·(κ1 − κ2) → 1`
//! that replaces the unit-slope normalization.
//!
//! All evaluations go through `x^κ2 · expm1((κ1 − κ2) ln x)` so the
//! logarithm stays accurate as `κ1 − κ2 → 0`. In particular `Λ(1) = 0` and
//! `Λ'(1) = 1` hold exactly.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::entropy::{Distribution, ParamPair};
use crate::error::{Error, Result};
use crate::roots::invert_monotone;
use crate::scalar::{geometric_ladder, ordered_sum, Real};

/// Deformation parameters `(κ1, κ2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaPair<T> {
    pub kappa1: T,
    pub kappa2: T,
}

impl<T: Real> KappaPair<T> {
    pub fn new(kappa1: T, kappa2: T) -> Self {
        Self { kappa1, kappa2 }
    }

    /// `(δ, −δ)`, the default probe of the classical limit.
    pub fn symmetric(delta: T) -> Self {
        Self::new(delta, -delta)
    }

    pub fn gap(self) -> T {
        self.kappa1 - self.kappa2
    }

    /// The entropy parameters `(α, β) = (κ1 + 1, κ2 + 1)` giving the same
    /// functional with the canonical normalizer at `k = 1`.
    pub fn to_params(self) -> ParamPair<T> {
        ParamPair::new(self.kappa1 + T::one(), self.kappa2 + T::one())
    }

    pub fn from_params(pair: ParamPair<T>) -> Self {
        Self::new(pair.alpha - T::one(), pair.beta - T::one())
    }

    fn ensure_distinct(self) -> Result<T> {
        let d = self.gap();
        if d == T::zero() || !d.is_finite() {
            return Err(Error::DegenerateParams {
                what: "kappa1 and kappa2",
                a: self.kappa1.as_f64(),
                b: self.kappa2.as_f64(),
            });
        }
        Ok(d)
    }
}

impl<T: Real> fmt::Display for KappaPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(κ1={}, κ2={})", self.kappa1, self.kappa2)
    }
}

/// Geometric symmetric path `(δ, −δ)` with `δ` from `10^from` down to `10^to`.
pub fn symmetric_kappa_path<T: Real>(from: i32, to: i32) -> Vec<KappaPair<T>> {
    crate::scalar::decades(from, to)
        .into_iter()
        .map(KappaPair::symmetric)
        .collect()
}

type CoefFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// Integration constant `A(κ1, κ2)` in `Λ(x) = A·(x^κ1 − x^κ2)`.
///
/// It can be given either directly or through the product
/// `A(κ1,κ2)·(κ1 − κ2)`; the limit check uses the product form when it is
/// available, so no cancellation error enters it.
#[derive(Clone)]
pub struct CoefficientA<T> {
    name: String,
    a: CoefFn<T>,
    scaled: CoefFn<T>,
}

impl<T: Real> CoefficientA<T> {
    /// From `A(κ1, κ2)` itself.
    pub fn new<F>(name: impl Into<String>, a: F) -> Self
    where
        F: Fn(T, T) -> T + Send + Sync + 'static,
    {
        let a: CoefFn<T> = Arc::new(a);
        let a2 = a.clone();
        Self { name: name.into(), a, scaled: Arc::new(move |k1, k2| a2(k1, k2) * (k1 - k2)) }
    }

    /// From `A(κ1, κ2)·(κ1 − κ2)`.
    pub fn from_scaled<F>(name: impl Into<String>, scaled: F) -> Self
    where
        F: Fn(T, T) -> T + Send + Sync + 'static,
    {
        let scaled: CoefFn<T> = Arc::new(scaled);
        let s2 = scaled.clone();
        Self { name: name.into(), a: Arc::new(move |k1, k2| s2(k1, k2) / (k1 - k2)), scaled }
    }

    /// `A = 1/(κ1 − κ2)`, the choice giving `Λ'(1) = 1`.
    pub fn unit_slope() -> Self {
        Self::from_scaled("1/(k1-k2)", |_, _| T::one())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, kp: KappaPair<T>) -> T {
        (self.a)(kp.kappa1, kp.kappa2)
    }

    /// `A(κ1, κ2)·(κ1 − κ2)`.
    pub fn scaled(&self, kp: KappaPair<T>) -> T {
        (self.scaled)(kp.kappa1, kp.kappa2)
    }
}

impl<T: Real> fmt::Debug for CoefficientA<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientA").field("name", &self.name).finish()
    }
}

fn ensure_positive<T: Real>(x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("logarithm argument must be positive and finite, got {x}")))
    }
}

/// `expm1(d·ln x)/d`, i.e. `(x^d − 1)/d`.
#[inline]
fn scaled_expm1<T: Real>(x: T, d: T) -> T {
    (d * x.ln()).exp_m1() / d
}

#[inline]
fn lambda_unchecked<T: Real>(x: T, kp: KappaPair<T>, d: T) -> T {
    x.powf(kp.kappa2) * scaled_expm1(x, d)
}

#[inline]
fn lambda_prime_unchecked<T: Real>(x: T, kp: KappaPair<T>, d: T) -> T {
    x.powf(kp.kappa2 - T::one()) * (T::one() + kp.kappa1 * scaled_expm1(x, d))
}

/// `Λ(x) = (x^κ1 − x^κ2)/(κ1 − κ2)`.
pub fn lambda<T: Real>(x: T, kp: KappaPair<T>) -> Result<T> {
    ensure_positive(x)?;
    let d = kp.ensure_distinct()?;
    Ok(lambda_unchecked(x, kp, d))
}

/// `A(κ1,κ2)·(x^κ1 − x^κ2)` for an arbitrary coefficient.
pub fn lambda_general<T: Real>(x: T, kp: KappaPair<T>, a: &CoefficientA<T>) -> Result<T> {
    ensure_positive(x)?;
    let gap = if kp.kappa1 == kp.kappa2 {
        T::zero()
    } else {
        x.powf(kp.kappa2) * (kp.gap() * x.ln()).exp_m1()
    };
    Ok(a.eval(kp) * gap)
}

/// `Λ'(x) = (κ1 x^(κ1−1) − κ2 x^(κ2−1))/(κ1 − κ2)`.
pub fn lambda_prime<T: Real>(x: T, kp: KappaPair<T>) -> Result<T> {
    ensure_positive(x)?;
    let d = kp.ensure_distinct()?;
    Ok(lambda_prime_unchecked(x, kp, d))
}

/// The sequence `A(κ1,κ2)·(κ1 − κ2)` along a path shrinking to `(0, 0)`.
#[derive(Debug, Clone, Serialize)]
pub struct ALimitReport {
    pub coefficient: String,
    pub values: Vec<f64>,
    /// Largest `|value − 1|` over the last quarter of the path (at least one point).
    pub tail_error: f64,
    pub tolerance: f64,
    pub satisfied: bool,
}

/// Checks `lim A(κ1,κ2)·(κ1 − κ2) = 1` along `path`.
pub fn check_a_limit<T: Real>(a: &CoefficientA<T>, path: &[KappaPair<T>], tol: f64) -> ALimitReport {
    let values: Vec<f64> = path
        .iter()
        .map(|&kp| a.scaled(kp).as_f64())
        .collect();
    let tail_len = values.len().div_ceil(4).max(1).min(values.len());
    let tail_error = values[values.len() - tail_len..]
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    let satisfied = !values.is_empty() && tail_error <= tol;
    ALimitReport {
        coefficient: a.name().to_owned(),
        values,
        tail_error: if tail_len == 0 { f64::NAN } else { tail_error },
        tolerance: tol,
        satisfied,
    }
}

/// Number of points in the monotonicity pre-check grid.
pub const MONOTONE_GRID_POINTS: usize = 256;
/// Lower end of the monotonicity pre-check grid.
pub const MONOTONE_GRID_FLOOR: f64 = 1e-12;

/// Residual tolerance for numerical inversion, relative to `max(1, |y|)`.
pub(crate) fn inversion_tol<T: Real>(y: T) -> T {
    let base = T::lit(1e-12).max(T::epsilon() * T::lit(8.0));
    base * T::one().max(y.abs())
}

/// Stopping threshold for the root finder, a few ulps of `max(1, |y|)`.
/// Bracket collapse ends the search earlier when this is out of reach.
pub(crate) fn polish_tol<T: Real>(y: T) -> T {
    T::epsilon() * T::lit(4.0) * T::one().max(y.abs())
}

/// Verifies `g'` has the required sign on the 256-point log grid over
/// `(1e-12, x_max]`.
pub(crate) fn check_monotone_grid<T: Real, D: Fn(T) -> T>(
    derivative: D,
    x_max: T,
    increasing: bool,
) -> Result<()> {
    for x in geometric_ladder(T::lit(MONOTONE_GRID_FLOOR), x_max, MONOTONE_GRID_POINTS) {
        let g = derivative(x);
        let ok = if increasing { g > T::zero() } else { g < T::zero() };
        if !ok {
            return Err(Error::Monotonicity { x: x.as_f64(), derivative: g.as_f64() });
        }
    }
    Ok(())
}

/// Shrinks `lo` geometrically until `f(lo)` is on the required side of `y`.
pub(crate) fn extend_lower_bracket<T: Real, F: Fn(T) -> T>(
    f: F,
    y: T,
    increasing: bool,
    hi: T,
) -> Result<T> {
    let mut lo = T::lit(MONOTONE_GRID_FLOOR).min(hi);
    let step = T::lit(1e-8);
    loop {
        let v = f(lo);
        let bracketed = if increasing { v <= y } else { v >= y };
        if bracketed {
            return Ok(lo);
        }
        let next = lo * step;
        if next <= T::min_positive_value() || !f(next).is_finite() {
            return Err(Error::Range {
                y: y.as_f64(),
                lo: v.as_f64(),
                hi: f(hi).as_f64(),
            });
        }
        lo = next;
    }
}

/// Generalized exponential `E(y) = Λ⁻¹(y)` on `(0, x_max]` (`x_max`
/// defaults to 1).
///
/// The map is first checked to be strictly increasing on a logarithmic grid;
/// the inverse is then found by bracketing with safeguarded Newton steps to
/// `|Λ(x) − y| ≤ 1e-12·max(1, |y|)`.
pub fn gen_exp<T: Real>(y: T, kp: KappaPair<T>, x_max: Option<T>) -> Result<T> {
    let d = kp.ensure_distinct()?;
    let x_max = x_max.unwrap_or_else(T::one);
    if !(x_max > T::lit(MONOTONE_GRID_FLOOR)) || !x_max.is_finite() {
        return Err(Error::Domain(format!("x_max must exceed {MONOTONE_GRID_FLOOR:e}, got {x_max}")));
    }
    if !y.is_finite() {
        return Err(Error::Domain(format!("target {y} is not finite")));
    }
    let f = |x: T| lambda_unchecked(x, kp, d);
    let df = |x: T| lambda_prime_unchecked(x, kp, d);
    check_monotone_grid(df, x_max, true)?;

    let top = f(x_max);
    if y > top {
        return Err(Error::Range { y: y.as_f64(), lo: lambda_at_zero(kp).as_f64(), hi: top.as_f64() });
    }
    let lo = extend_lower_bracket(f, y, true, x_max)?;
    let tol = inversion_tol(y);
    let inv = invert_monotone(f, df, y, lo, x_max, polish_tol(y));
    if inv.residual > tol {
        return Err(Error::NoConvergence {
            iterations: inv.iterations,
            residual: inv.residual.as_f64(),
            trace: vec![format!("gen_exp(y={y}) stalled at x={}", inv.x)],
        });
    }
    Ok(inv.x)
}

/// `lim_{x→0⁺} Λ(x)`.
pub fn lambda_at_zero<T: Real>(kp: KappaPair<T>) -> T {
    let lo = kp.kappa1.min(kp.kappa2);
    let hi = kp.kappa1.max(kp.kappa2);
    if lo < T::zero() {
        T::neg_infinity()
    } else if lo == T::zero() {
        -T::one() / hi
    } else {
        T::zero()
    }
}

/// `−Σ p_i Λ(p_i)` with zero-probability outcomes contributing 0.
pub fn deformed_entropy_from_log<T: Real>(dist: &Distribution<T>, kp: KappaPair<T>) -> Result<T> {
    let d = kp.ensure_distinct()?;
    Ok(deformed_entropy_unchecked(dist.probs(), kp, d))
}

pub(crate) fn deformed_entropy_unchecked<T: Real>(probs: &[T], kp: KappaPair<T>, d: T) -> T {
    ordered_sum(
        probs
            .iter()
            .map(|&p| if p == T::zero() { T::zero() } else { -p * lambda_unchecked(p, kp, d) })
            .collect(),
    )
}
