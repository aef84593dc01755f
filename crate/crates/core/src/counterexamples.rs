//! Two pathological normalizers and the scanners used to study them near
//! `(α, β) = (1, 1)`.
//!
//! * [`normalizer_a`] is built from the Weierstrass function
//!   `W(x) = Σ a^k cos(b^k π x)`. It depends on `α` only.
//! * [`normalizer_b`] is the rational function
//!   `(α − β)/(2k) · ((α−1)(β−1)/((α−1)² + (β−1)²) − 1)` with `C(1,1) = 0`.
//!   Its ratio `C/(α − β)` tends to `(m/(1+m²) − 1)/(2k)` along the line of
//!   slope `m` through `(1,1)`, so it has no limit there.

use num_bigint::BigUint;
use serde::Serialize;

use crate::entropy::{entropy, region_contains, shannon_entropy, Distribution, Normalizer, ParamPair, Property};
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Real};
use crate::verify::ApproachSide;

/// Parameters of the Weierstrass series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeierstrassParams<T> {
    a: T,
    b: u64,
    truncation_tol: T,
}

impl<T: Real> WeierstrassParams<T> {
    /// Requires `0 < a < 1`, `b` odd, `a·b > 1 + 3π/2` and a positive
    /// truncation tolerance.
    pub fn new(a: T, b: u64, truncation_tol: T) -> Result<Self> {
        if !(a > T::zero() && a < T::one()) {
            return Err(Error::Domain(format!("Weierstrass a must lie in (0, 1), got {a}")));
        }
        if b % 2 == 0 {
            return Err(Error::Domain(format!("Weierstrass b must be a positive odd integer, got {b}")));
        }
        let threshold = T::one() + T::lit(1.5) * T::PI();
        if !(a * T::from_u64(b).unwrap() > threshold) {
            return Err(Error::Domain(format!("Weierstrass a*b must exceed 1 + 3*pi/2 = {threshold}")));
        }
        if !(truncation_tol > T::zero()) || !truncation_tol.is_finite() {
            return Err(Error::Domain(format!("truncation tolerance must be positive, got {truncation_tol}")));
        }
        Ok(Self { a, b, truncation_tol })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn truncation_tol(&self) -> T {
        self.truncation_tol
    }

    /// Index `K` of the last retained term. The geometric tail
    /// `a^(K+1)/(1 − a)` is at most a quarter of the tolerance, leaving the
    /// rest for rounding.
    pub fn last_term(&self) -> usize {
        let target = self.truncation_tol / T::lit(4.0);
        let one_minus_a = T::one() - self.a;
        let mut k = 0usize;
        let mut next = self.a; // a^(k+1)
        while next / one_minus_a > target {
            next = next * self.a;
            k += 1;
        }
        k
    }

    /// `a^(K+1)/(1 − a)`.
    pub fn tail_bound(&self) -> T {
        self.a.powi(self.last_term() as i32 + 1) / (T::one() - self.a)
    }

    /// `W(0) = 1/(1 − a)`, also the bound on `|W|`.
    pub fn sup(&self) -> T {
        T::one() / (T::one() - self.a)
    }
}

impl Default for WeierstrassParams<f64> {
    /// `a = 0.9`, `b = 7`, tolerance `1e-12`.
    fn default() -> Self {
        Self::new(0.9, 7, 1e-12).expect("valid defaults")
    }
}

/// Phases `b^k x mod 2` for `k = 0..=last`, computed exactly from the binary
/// expansion of `x`.
fn phases<T: Real>(x: T, b: u64, last: usize) -> Vec<f64> {
    let (mantissa, exponent, _) = x.integer_decode();
    if mantissa == 0 {
        return vec![0.0; last + 1];
    }
    if exponent >= 0 {
        // integer argument: b odd keeps the parity
        let phase = if exponent == 0 { (mantissa % 2) as f64 } else { 0.0 };
        return vec![phase; last + 1];
    }
    let q = (-exponent) as u32;
    let mut out = Vec::with_capacity(last + 1);
    if q < 64 {
        let modulus: u128 = 1u128 << (q + 1);
        let mut r = (mantissa as u128) % modulus;
        let scale = 2f64.powi(-(q as i32));
        for _ in 0..=last {
            out.push(r as f64 * scale);
            r = (r * b as u128) % modulus;
        }
    } else {
        let modulus = BigUint::from(1u8) << (q + 1);
        let mut r = BigUint::from(mantissa) % &modulus;
        let shift = q - 62;
        let scale = 2f64.powi(-62);
        let bb = BigUint::from(b);
        for _ in 0..=last {
            let top: u64 = (&r >> shift).try_into().expect("fits in 63 bits");
            out.push(top as f64 * scale);
            r = (r * &bb) % &modulus;
        }
    }
    out
}

/// Truncated Weierstrass series, within `truncation_tol` of the full sum.
///
/// Each phase `b^k x mod 2` is reduced exactly before the cosine is taken,
/// so high-frequency terms are evaluated at the point actually requested.
pub fn weierstrass<T: Real>(x: T, wp: &WeierstrassParams<T>) -> T {
    if !x.is_finite() {
        return T::nan();
    }
    let last = wp.last_term();
    let mut weight = T::one();
    let terms = phases(x, wp.b, last).into_iter().map(|phase| {
        let folded = if phase > 1.0 { 2.0 - phase } else { phase };
        let term = weight * (T::PI() * T::lit(folded)).cos();
        weight = weight * wp.a;
        term
    });
    compensated_sum(terms.collect::<Vec<_>>())
}

/// `C(α, β) = ((1 − α)/k) · (W(α − 1) + 2 W(0)) / (3 W(0))`.
///
/// Depends on `α` alone and vanishes on the whole line `α = 1`.
pub fn normalizer_a<T: Real>(k: T, wp: WeierstrassParams<T>) -> Result<Normalizer<T>> {
    let w0 = weierstrass(T::zero(), &wp);
    let three_w0 = T::lit(3.0) * w0;
    let two_w0 = w0 + w0;
    Normalizer::new(
        "counterexample-a",
        k,
        &[Property::I, Property::II, Property::IIIPrime],
        move |alpha: T, _beta: T| {
            let one = T::one();
            ((one - alpha) / k) * (weierstrass(alpha - one, &wp) + two_w0) / three_w0
        },
    )
}

/// `xy/(x² + y²)` with `x = α − 1`, `y = β − 1`, scaled against overflow
/// and underflow. Undefined (NaN) at `(1, 1)`.
pub fn direction_fraction<T: Real>(alpha: T, beta: T) -> T {
    let x = alpha - T::one();
    let y = beta - T::one();
    let s = x.abs().max(y.abs());
    if s == T::zero() {
        return T::nan();
    }
    let (x, y) = (x / s, y / s);
    x * y / (x * x + y * y)
}

/// `C(α, β) = (α − β)/(2k) · (xy/(x² + y²) − 1)`, `C(1,1) = 0`.
pub fn normalizer_b<T: Real>(k: T) -> Result<Normalizer<T>> {
    Normalizer::new(
        "counterexample-b",
        k,
        &[Property::I, Property::II, Property::III, Property::IV],
        move |alpha: T, beta: T| {
            if alpha == T::one() && beta == T::one() {
                return T::zero();
            }
            (alpha - beta) / (k + k) * (direction_fraction(alpha, beta) - T::one())
        },
    )
}

/// `(m/(1 + m²) − 1)/(2k)`, the limit of `C/(α − β)` for [`normalizer_b`]
/// along slope `m`.
pub fn normalizer_b_directional_limit<T: Real>(m: T, k: T) -> T {
    (m / (T::one() + m * m) - T::one()) / (k + k)
}

fn line_point<T: Real>(m: T, r: T, side: ApproachSide) -> ParamPair<T> {
    let s = if side == ApproachSide::Negative { -T::one() } else { T::one() };
    ParamPair::new(T::one() + s * r, T::one() + s * m * r)
}

/// Picks the side of `(1,1)` from which the line of slope `m` stays in the
/// region for all radii, preferring `α > 1`.
pub fn admissible_side<T: Real>(m: T, radii: &[T]) -> ApproachSide {
    for side in [ApproachSide::Positive, ApproachSide::Negative] {
        if radii.iter().all(|&r| {
            let p = line_point(m, r, side);
            region_contains(p) && !p.is_diagonal()
        }) {
            return side;
        }
    }
    ApproachSide::Outside
}

fn check_radii<T: Real>(radii: &[T]) -> Result<()> {
    if radii.is_empty() || radii.iter().any(|r| !(*r > T::zero()) || !r.is_finite()) {
        return Err(Error::Domain("radii must be positive and finite".into()));
    }
    if radii.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Domain("radii must be strictly decreasing".into()));
    }
    Ok(())
}

/// `C/(α − β)` sampled along one direction.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionalScan {
    pub m: f64,
    pub side: ApproachSide,
    /// `(r, C/(α − β))` rows in radius order.
    pub rows: Vec<(f64, f64)>,
    /// Value at the smallest radius.
    pub limit_estimate: f64,
}

/// Samples `C(1+r, 1+m·r)/(α − β)` at each radius.
///
/// The side of approach is chosen by [`admissible_side`]. When no side stays
/// in the region (any `m > 0`), the normalizer formula is evaluated outside
/// it and the scan is marked [`ApproachSide::Outside`].
pub fn directional_limit_scan<T: Real>(norm: &Normalizer<T>, m: T, radii: &[T]) -> Result<DirectionalScan> {
    if m == T::one() {
        return Err(Error::DegenerateDirection);
    }
    if !m.is_finite() {
        return Err(Error::Domain(format!("slope must be finite, got {m}")));
    }
    check_radii(radii)?;
    let side = admissible_side(m, radii);
    let rows: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            let p = line_point(m, r, side);
            (r.as_f64(), (norm.eval(p) / (p.alpha - p.beta)).as_f64())
        })
        .collect();
    let limit_estimate = rows.last().map(|r| r.1).unwrap_or(f64::NAN);
    Ok(DirectionalScan { m: m.as_f64(), side, rows, limit_estimate })
}

/// Per-slope entropy limits near `(1,1)`.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyLimitDemo {
    pub normalizer: String,
    pub shannon: f64,
    pub slopes: Vec<SlopeLimit>,
    /// `max − min` of the per-slope limit estimates.
    pub spread: f64,
    /// `spread > 0.1·|shannon|`: the entropy has no single limit at `(1,1)`.
    pub shows_no_limit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlopeLimit {
    pub m: f64,
    pub side: ApproachSide,
    pub rows: Vec<(f64, f64)>,
    pub limit_estimate: f64,
}

/// Evaluates the entropy along straight lines through `(1,1)` and reports
/// how far the per-slope limits disagree.
pub fn entropy_limit_failure_demo<T: Real>(
    dist: &Distribution<T>,
    norm: &Normalizer<T>,
    slopes: &[T],
    radii: &[T],
) -> Result<EntropyLimitDemo> {
    check_radii(radii)?;
    let mut out = Vec::with_capacity(slopes.len());
    for &m in slopes {
        if m == T::one() {
            return Err(Error::DegenerateDirection);
        }
        let side = admissible_side(m, radii);
        if side == ApproachSide::Outside {
            let p = line_point(m, radii[0], ApproachSide::Positive);
            return Err(Error::Region { alpha: p.alpha.as_f64(), beta: p.beta.as_f64() });
        }
        let rows = radii
            .iter()
            .map(|&r| Ok((r.as_f64(), entropy(dist, line_point(m, r, side), norm)?.as_f64())))
            .collect::<Result<Vec<_>>>()?;
        let limit_estimate = rows.last().map(|r| r.1).unwrap_or(f64::NAN);
        out.push(SlopeLimit { m: m.as_f64(), side, rows, limit_estimate });
    }
    let hi = out.iter().map(|s| s.limit_estimate).fold(f64::NEG_INFINITY, f64::max);
    let lo = out.iter().map(|s| s.limit_estimate).fold(f64::INFINITY, f64::min);
    let spread = if out.is_empty() { 0.0 } else { hi - lo };
    let shannon = shannon_entropy(dist, norm.k()).as_f64();
    Ok(EntropyLimitDemo {
        normalizer: norm.name().to_owned(),
        shannon,
        slopes: out,
        spread,
        shows_no_limit: spread > 0.1 * shannon.abs(),
    })
}

/// Forward difference quotients of `f` at `x` over several step sizes.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientSpread {
    pub x: f64,
    /// `(h, (f(x+h) − f(x))/h)`.
    pub quotients: Vec<(f64, f64)>,
    /// `max − min` of the quotients.
    pub spread: f64,
}

pub fn difference_quotient_spread<T: Real, F: Fn(T) -> T>(f: F, x: T, steps: &[T]) -> QuotientSpread {
    let fx = f(x);
    let quotients: Vec<(f64, f64)> = steps
        .iter()
        .map(|&h| (h.as_f64(), ((f(x + h) - fx) / h).as_f64()))
        .collect();
    let hi = quotients.iter().map(|q| q.1).fold(f64::NEG_INFINITY, f64::max);
    let lo = quotients.iter().map(|q| q.1).fold(f64::INFINITY, f64::min);
    QuotientSpread { x: x.as_f64(), quotients, spread: hi - lo }
}

/// Difference quotients of `W(α − 1)` at `α`. Persistent disagreement
/// across scales is the numerical signature of non-differentiability.
pub fn weierstrass_quotient_spread<T: Real>(alpha: T, wp: &WeierstrassParams<T>, steps: &[T]) -> QuotientSpread {
    let shift = alpha - T::one();
    let mut s = difference_quotient_spread(|x| weierstrass(x, wp), shift, steps);
    s.x = alpha.as_f64();
    s
}

/// Difference quotients of `C(α, ·)/(α − 1)` for [`normalizer_a`] at `α`.
pub fn normalizer_a_quotient_spread<T: Real>(alpha: T, k: T, wp: WeierstrassParams<T>, steps: &[T]) -> Result<QuotientSpread> {
    let norm = normalizer_a(k, wp)?;
    Ok(difference_quotient_spread(
        |a: T| norm.c(a, T::one()) / (a - T::one()),
        alpha,
        steps,
    ))
}
