//! Distributions, parameter pairs, normalizers and the two-parameter
//! trace-form entropy
//!
//! ```text
//! S(p) = Σ_i (p_i^α − p_i^β) / C(α, β)
//! ```
//!
//! together with its Shannon target `−k Σ p_i ln p_i`.
//!
//! Powers follow the convention `0^x := 0` for every `x ≥ 0`, including
//! `x = 0`. This makes appending a zero-probability outcome leave the
//! entropy bit-for-bit unchanged.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{ordered_sum, pow0, pow_diff, Real};

/// Absolute tolerance on `Σ p_i = 1`.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    probs: Vec<T>,
}

impl<T: Real> Distribution<T> {
    /// Validates `probs`: non-empty, finite, non-negative, summing to one
    /// within [`SIMPLEX_TOL`]. Never renormalizes.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < T::zero() {
                return Err(Error::InvalidDistribution(format!(
                    "entry {i} = {p} is not a finite non-negative probability"
                )));
            }
        }
        let total = probs.iter().fold(T::zero(), |a, &b| a + b);
        if (total - T::one()).abs() > T::lit(SIMPLEX_TOL) {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, expected 1 within {SIMPLEX_TOL:e}"
            )));
        }
        Ok(Self { probs })
    }

    /// Divides non-negative weights by their total. Explicit opt-in only.
    pub fn renormalized(weights: Vec<T>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total = weights.iter().fold(T::zero(), |a, &b| a + b);
        if total <= T::zero() {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("no outcomes".into()));
        }
        let p = T::one() / T::from_usize(n).unwrap();
        Ok(Self { probs: vec![p; n] })
    }

    /// Point mass on outcome `at` out of `n`.
    pub fn certain(n: usize, at: usize) -> Result<Self> {
        if at >= n {
            return Err(Error::InvalidDistribution(format!("index {at} out of {n}")));
        }
        let mut probs = vec![T::zero(); n];
        probs[at] = T::one();
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// The same distribution with one extra zero-probability outcome.
    pub fn expanded(&self) -> Self {
        let mut probs = self.probs.clone();
        probs.push(T::zero());
        Self { probs }
    }

    pub(crate) fn from_trusted(probs: Vec<T>) -> Self {
        Self { probs }
    }
}

/// An `(α, β)` pair. Any reals are accepted; see [`ParamPair::in_region`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPair<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> ParamPair<T> {
    pub fn new(alpha: T, beta: T) -> Self {
        Self { alpha, beta }
    }

    pub fn swapped(self) -> Self {
        Self::new(self.beta, self.alpha)
    }

    pub fn in_region(self) -> bool {
        region_contains(self)
    }

    pub fn is_diagonal(self) -> bool {
        self.alpha == self.beta
    }
}

impl<T: Real> fmt::Display for ParamPair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// Membership in `R_α ∪ R_β` where
/// `R_α = {α ≥ 1, 0 ≤ β ≤ 1} \ {(1,0)}` and `R_β = {0 ≤ α ≤ 1, β ≥ 1} \ {(0,1)}`.
pub fn region_contains<T: Real>(pair: ParamPair<T>) -> bool {
    let (a, b) = (pair.alpha, pair.beta);
    let (zero, one) = (T::zero(), T::one());
    let in_r_alpha = a >= one && b >= zero && b <= one && !(a == one && b == zero);
    let in_r_beta = a >= zero && a <= one && b >= one && !(a == zero && b == one);
    in_r_alpha || in_r_beta
}

/// Normalizer properties a construction may claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// Continuous, sign of `β − α`, antisymmetric.
    I,
    /// Vanishes on the diagonal only.
    II,
    /// Differentiable on a punctured neighbourhood of 1.
    III,
    /// One-sided derivative limits `∓1/k` at 1.
    IV,
    /// `C/(α − β)` continuous at `(1,1)` with limit `−1/k`.
    IIIPrime,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::I => "I",
            Property::II => "II",
            Property::III => "III",
            Property::IV => "IV",
            Property::IIIPrime => "III'",
        };
        f.write_str(s)
    }
}

type NormFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// A named `C(α, β)` with its constant `k` and the properties it claims.
///
/// Claims are informational; nothing in the library relies on them.
#[derive(Clone)]
pub struct Normalizer<T> {
    name: String,
    c: NormFn<T>,
    k: T,
    claimed: BTreeSet<Property>,
}

impl<T: Real> Normalizer<T> {
    pub fn new<F>(name: impl Into<String>, k: T, claimed: &[Property], c: F) -> Result<Self>
    where
        F: Fn(T, T) -> T + Send + Sync + 'static,
    {
        if !(k > T::zero()) || !k.is_finite() {
            return Err(Error::Domain(format!("constant k must be positive, got {k}")));
        }
        Ok(Self {
            name: name.into(),
            c: Arc::new(c),
            k,
            claimed: claimed.iter().copied().collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn claimed_properties(&self) -> &BTreeSet<Property> {
        &self.claimed
    }

    #[inline]
    pub fn c(&self, alpha: T, beta: T) -> T {
        (self.c)(alpha, beta)
    }

    pub fn eval(&self, pair: ParamPair<T>) -> T {
        self.c(pair.alpha, pair.beta)
    }
}

impl<T: Real> fmt::Debug for Normalizer<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Normalizer")
            .field("name", &self.name)
            .field("k", &self.k)
            .field("claimed", &self.claimed)
            .finish()
    }
}

/// `C(α, β) = (β − α)/k`.
pub fn canonical_normalizer<T: Real>(k: T) -> Result<Normalizer<T>> {
    Normalizer::new(
        "canonical",
        k,
        &[
            Property::I,
            Property::II,
            Property::III,
            Property::IV,
            Property::IIIPrime,
        ],
        move |a, b| (b - a) / k,
    )
}

/// Checks the preconditions shared by every evaluation and returns `C(α, β)`.
pub(crate) fn checked_c<T: Real>(pair: ParamPair<T>, norm: &Normalizer<T>) -> Result<T> {
    if pair.is_diagonal() {
        return Err(Error::DegenerateParams {
            what: "alpha and beta",
            a: pair.alpha.as_f64(),
            b: pair.beta.as_f64(),
        });
    }
    if !region_contains(pair) {
        return Err(Error::Region {
            alpha: pair.alpha.as_f64(),
            beta: pair.beta.as_f64(),
        });
    }
    let c = norm.eval(pair);
    if c == T::zero() || !c.is_finite() {
        return Err(Error::ZeroNormalizer {
            name: norm.name().to_owned(),
            alpha: pair.alpha.as_f64(),
            beta: pair.beta.as_f64(),
        });
    }
    Ok(c)
}

/// `p^α − p^β` with `0^x := 0`.
#[inline]
pub(crate) fn power_gap<T: Real>(p: T, pair: ParamPair<T>) -> T {
    if p == T::zero() {
        T::zero()
    } else {
        pow_diff(p, pair.alpha, pair.beta)
    }
}

/// Single term `(p^α − p^β)/C(α, β)`.
pub fn summand<T: Real>(p: T, pair: ParamPair<T>, norm: &Normalizer<T>) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    let c = checked_c(pair, norm)?;
    Ok(power_gap(p, pair) / c)
}

pub(crate) fn entropy_with_c<T: Real>(probs: &[T], pair: ParamPair<T>, c: T) -> T {
    ordered_sum(probs.iter().map(|&p| power_gap(p, pair) / c).collect())
}

/// `Σ_i (p_i^α − p_i^β)/C(α, β)`.
///
/// Terms are summed in sorted order, so the value is invariant under any
/// permutation of the outcomes.
pub fn entropy<T: Real>(dist: &Distribution<T>, pair: ParamPair<T>, norm: &Normalizer<T>) -> Result<T> {
    let c = checked_c(pair, norm)?;
    Ok(entropy_with_c(dist.probs(), pair, c))
}

/// `−k Σ p_i ln p_i` with `0 ln 0 := 0`.
pub fn shannon_entropy<T: Real>(dist: &Distribution<T>, k: T) -> T {
    let terms = dist
        .probs()
        .iter()
        .map(|&p| if p == T::zero() { T::zero() } else { -p * p.ln() })
        .collect();
    k * ordered_sum(terms)
}

/// `Σ_i p_i^x` under `0^x := 0`.
pub(crate) fn power_sum<T: Real>(probs: &[T], x: T) -> T {
    ordered_sum(probs.iter().map(|&p| pow0(p, x)).collect())
}

/// A joint distribution `p_ij` with rows of possibly different lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Real> JointDistribution<T> {
    pub fn new(rows: Vec<Vec<T>>) -> Result<Self> {
        if rows.is_empty() || rows.iter().any(Vec::is_empty) {
            return Err(Error::InvalidDistribution("every row needs at least one entry".into()));
        }
        let mut total = T::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < T::zero() {
                    return Err(Error::InvalidDistribution(format!(
                        "entry ({i},{j}) = {p} is not a finite non-negative probability"
                    )));
                }
                total = total + p;
            }
        }
        if (total - T::one()).abs() > T::lit(SIMPLEX_TOL) {
            return Err(Error::InvalidDistribution(format!(
                "joint entries sum to {total}, expected 1"
            )));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// `p_i = Σ_j p_ij`.
    pub fn marginals(&self) -> Vec<T> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(T::zero(), |a, &b| a + b))
            .collect()
    }

    /// `p(j|i) = p_ij / p_i`, or `None` when `p_i = 0`.
    pub fn conditional(&self, i: usize) -> Option<Vec<T>> {
        let row = self.rows.get(i)?;
        let pi = row.iter().fold(T::zero(), |a, &b| a + b);
        if pi == T::zero() {
            None
        } else {
            Some(row.iter().map(|&p| p / pi).collect())
        }
    }

    /// All entries flattened row by row.
    pub fn flattened(&self) -> Vec<T> {
        self.rows.iter().flatten().copied().collect()
    }
}
