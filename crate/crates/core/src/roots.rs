//! Bracketed root finding for monotone scalar functions.

use crate::error::{CloakError, Result};

/// Outcome of a bracketed solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
}

/// Newton iteration safeguarded by a bisection bracket.
///
/// `f` returns `(value, derivative)`. The bracket `[lo, hi]` must straddle a
/// sign change of `value`. A Newton step that leaves the current bracket, or
/// fails to halve the residual, is replaced by bisection.
pub fn newton_bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo == 0.0 {
        return Ok(Root { x: lo, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(CloakError::Domain(format!(
            "bracket [{lo}, {hi}] does not straddle a root ({f_lo:e}, {f_hi:e})"
        )));
    }
    let increasing = f_hi > 0.0;
    let mut x = 0.5 * (lo + hi);
    let mut last_abs = f64::INFINITY;
    for it in 1..=max_iter {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(Root { x, iterations: it });
        }
        if (fx > 0.0) == increasing {
            hi = x;
        } else {
            lo = x;
        }
        if (hi - lo).abs() <= x_tol * (1.0 + x.abs()) {
            return Ok(Root { x: 0.5 * (lo + hi), iterations: it });
        }
        let newton = x - fx / dfx;
        let shrinking = fx.abs() <= 0.5 * last_abs;
        last_abs = fx.abs();
        let next = if dfx.is_finite() && dfx != 0.0 && newton > lo && newton < hi && shrinking {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= x_tol * (1.0 + x.abs()) {
            return Ok(Root { x: next, iterations: it });
        }
        x = next;
    }
    Err(CloakError::NonConvergence { iterations: max_iter, lo, hi })
}

/// Plain bisection on a monotone function; stops when the bracket width
/// falls below `x_tol` (absolute) or the residual below `f_tol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64, f_tol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        return Err(CloakError::Domain(format!(
            "bracket [{lo}, {hi}] does not straddle a root ({f_lo:e}, {f_hi:e})"
        )));
    }
    let increasing = f_hi > f_lo;
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.abs() <= f_tol || (hi - lo) <= x_tol {
            return Ok(Root { x: mid, iterations: it });
        }
        if (fm > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(CloakError::NonConvergence { iterations: max_iter, lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn newton_bisect_cube_root() {
        let r = newton_bisect(|x| (x * x * x - 2.0, 3.0 * x * x), 0.0, 2.0, 1e-15, 100).unwrap();
        assert!((r.x - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn newton_bisect_rejects_bad_bracket() {
        assert!(newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-12, 50).is_err());
    }

    #[test]
    fn bisect_decreasing() {
        let r = bisect(|x| Ok(1.0 - x), 0.0, 3.0, 1e-13, 0.0, 200).unwrap();
        assert!((r.x - 1.0).abs() < 1e-12);
    }
}
