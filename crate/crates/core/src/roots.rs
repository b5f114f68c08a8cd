//! Bracketed scalar root finding: bisection refined by Newton steps.

use crate::error::{Error, Result};

/// Find the root of `f` inside `[lo, hi]`, where `f(lo)` and `f(hi)` have
/// opposite signs. Newton steps (using `df`) are taken whenever they stay
/// inside the current bracket, otherwise the step falls back to bisection.
/// Converges when `|f(x)| < residual_tol` or the bracket collapses.
pub fn newton_bisect<F, D>(
    f: F,
    df: D,
    mut lo: f64,
    mut hi: f64,
    residual_tol: f64,
    max_iter: usize,
    stage: &'static str,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::numerical(
            stage,
            format!("no sign change on bracket [{lo}, {hi}]"),
        ));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        let fx = f(x);
        if fx.abs() < residual_tol {
            return Ok(x);
        }
        // shrink the bracket
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * (hi.abs() + lo.abs()) {
            let fx = f(x);
            if fx.abs() < residual_tol {
                return Ok(x);
            }
            return Err(Error::numerical(
                stage,
                format!("bracket collapsed at x={x} with residual {fx}"),
            ));
        }
    }
    let fx = f(x);
    if fx.abs() < residual_tol {
        return Ok(x);
    }
    Err(Error::numerical(
        stage,
        format!("no convergence after {max_iter} iterations (x={x}, residual={fx})"),
    ))
}
