//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion used for reports and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `x^e` with the convention `0^e := 0` for every exponent.
#[inline]
pub(crate) fn pow0<T: Real>(x: T, e: T) -> T {
    if x == T::zero() {
        T::zero()
    } else {
        x.powf(e)
    }
}

/// `(x^a - x^b) / d` for `x > 0`, evaluated as `x^b * expm1((a-b) ln x) / d`
/// so that nearly equal exponents do not cancel.
#[inline]
pub(crate) fn pow_diff<T: Real>(x: T, a: T, b: T) -> T {
    let l = x.ln();
    x.powf(b) * ((a - b) * l).exp_m1()
}

/// Sums after sorting ascending; the result is independent of input order.
pub(crate) fn ordered_sum<T: Real>(mut terms: Vec<T>) -> T {
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    terms.into_iter().fold(T::zero(), |acc, t| acc + t)
}

/// Neumaier compensated summation.
pub(crate) fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(terms: I) -> T {
    let mut sum = T::zero();
    let mut c = T::zero();
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            c = c + ((sum - s) + t);
        } else {
            c = c + ((t - s) + sum);
        }
        sum = s;
    }
    sum + c
}

/// `n` points geometrically spaced from `start` down (or up) to `end`, inclusive.
///
/// Interior points are interpolated in `log10`, so decade ladders such as
/// `(1e-1, 1e-6, 6)` land on the exact powers of ten.
pub fn geometric_ladder<T: Real>(start: T, end: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let (l0, l1) = (start.log10(), end.log10());
            let last = T::from_usize(n - 1).unwrap();
            let ten = T::lit(10.0);
            (0..n)
                .map(|i| match i {
                    0 => start,
                    i if i == n - 1 => end,
                    i => ten.powf(l0 + (l1 - l0) * T::from_usize(i).unwrap() / last),
                })
                .collect()
        }
    }
}

/// Decades `10^from, 10^(from-1), ..., 10^to` (`from > to`).
pub fn decades<T: Real>(from: i32, to: i32) -> Vec<T> {
    let ten = T::lit(10.0);
    if from >= to {
        (to..=from).rev().map(|e| ten.powi(e)).collect()
    } else {
        (from..=to).map(|e| ten.powi(e)).collect()
    }
}
