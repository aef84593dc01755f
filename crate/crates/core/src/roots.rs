//! Bracketed inversion of a strictly monotone scalar map.

use crate::scalar::Real;

/// Outcome of [`invert_monotone`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Inverse<T> {
    pub x: T,
    pub residual: T,
    pub iterations: usize,
}

const MAX_ITER: usize = 500;

/// Solves `f(x) = y` on `[lo, hi]` where `f(lo) - y` and `f(hi) - y` have
/// opposite signs (or one is zero).
///
/// Newton steps from `df` are taken whenever they stay strictly inside the
/// current bracket and shrink it fast enough; otherwise the step is a
/// bisection (geometric on wide positive brackets). Stops once `|f(x) - y| <= tol` or the bracket can no longer
/// be split in floating point; the best point seen is returned either way.
pub(crate) fn invert_monotone<T, F, D>(f: F, df: D, y: T, mut lo: T, mut hi: T, tol: T) -> Inverse<T>
where
    T: Real,
    F: Fn(T) -> T,
    D: Fn(T) -> T,
{
    let two = T::lit(2.0);
    let f_lo = f(lo) - y;
    let f_hi = f(hi) - y;
    if f_lo.abs() <= tol {
        return Inverse { x: lo, residual: f_lo.abs(), iterations: 0 };
    }
    if f_hi.abs() <= tol {
        return Inverse { x: hi, residual: f_hi.abs(), iterations: 0 };
    }
    let increasing = f_lo < T::zero();

    let mut best = if f_lo.abs() < f_hi.abs() { (lo, f_lo.abs()) } else { (hi, f_hi.abs()) };
    let mut x = (lo + hi) / two;
    let mut width_before = (hi - lo).abs();
    let mut iterations = 0;

    for it in 1..=MAX_ITER {
        iterations = it;
        let fx = f(x) - y;
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if fx.abs() <= tol {
            return Inverse { x, residual: fx.abs(), iterations: it };
        }
        // keep the root bracketed
        if (fx < T::zero()) == increasing {
            lo = x;
        } else {
            hi = x;
        }
        // geometric midpoint on wide positive brackets
        let mid = if lo > T::zero() && hi > lo * T::lit(4.0) {
            (lo * hi).sqrt()
        } else {
            lo + (hi - lo) / two
        };
        if mid <= lo || mid >= hi {
            break;
        }

        let slope = df(x);
        let newton = x - fx / slope;
        let width = hi - lo;
        let newton_ok = slope.is_finite()
            && slope != T::zero()
            && newton > lo
            && newton < hi
            && width <= width_before / two * T::lit(1.5);
        width_before = width;
        x = if newton_ok { newton } else { mid };
    }
    Inverse { x: best.0, residual: best.1, iterations }
}
