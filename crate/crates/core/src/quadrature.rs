//! Adaptive composite Gauss-Legendre quadrature.
//!
//! Panels use the 7-point rule; a panel is accepted when its value agrees
//! with the sum over its two halves, otherwise both halves are refined.

use crate::error::{CloakError, Result};

const GL7_NODES: [f64; 7] = [
    -0.949_107_912_342_758_5,
    -0.741_531_185_599_394_4,
    -0.405_845_151_377_397_2,
    0.0,
    0.405_845_151_377_397_2,
    0.741_531_185_599_394_4,
    0.949_107_912_342_758_5,
];
const GL7_WEIGHTS: [f64; 7] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_6,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_6,
    0.129_484_966_168_869_7,
];

const MAX_DEPTH: usize = 40;
const MAX_PANELS: usize = 200_000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub panels: usize,
}

/// 7-point Gauss-Legendre rule on a single panel.
pub fn gauss_legendre7<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL7_NODES.iter().zip(GL7_WEIGHTS.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Abscissae of the 7-point rule mapped onto `[a, b]`, with weights.
pub fn gauss_legendre7_points(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL7_NODES.iter().zip(GL7_WEIGHTS.iter()).map(move |(x, w)| (mid + half * x, w * half))
}

/// Integrates `f` over `[a, b]` to relative tolerance `rel_tol` (with an
/// absolute floor `abs_tol`). Non-finite integrand values are reported as
/// errors rather than propagated.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error_estimate: 0.0, panels: 0 });
    }
    if !(a < b) {
        return Err(CloakError::Quadrature(format!("bad interval [{a}, {b}]")));
    }
    let whole = gauss_legendre7(&mut f, a, b);
    // Panels are accepted against a share of the tolerance proportional to
    // their width, evaluated against the running magnitude estimate.
    let scale = if whole.is_finite() { whole.abs() } else { 0.0 };
    let mut stack = vec![(a, b, whole, 0usize)];
    let mut value = 0.0;
    let mut error = 0.0;
    let mut panels = 0usize;
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gauss_legendre7(&mut f, lo, mid);
        let right = gauss_legendre7(&mut f, mid, hi);
        let fine = left + right;
        if !fine.is_finite() {
            return Err(CloakError::Quadrature(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let err = (fine - coarse).abs();
        let share = (hi - lo) / (b - a);
        let allowed = (rel_tol * scale).max(abs_tol) * share;
        if err <= allowed || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH && err > allowed {
                return Err(CloakError::Quadrature(format!(
                    "maximum depth reached on [{lo}, {hi}], panel error {err:e}"
                )));
            }
            value += fine;
            error += err;
            panels += 1;
        } else {
            if stack.len() + panels > MAX_PANELS {
                return Err(CloakError::Quadrature("panel budget exhausted".into()));
            }
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Ok(Integral { value, error_estimate: error, panels })
}

/// Integrates over consecutive intervals of `breaks`, adaptively on each.
pub fn integrate_piecewise<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Integral> {
    let mut total = Integral { value: 0.0, error_estimate: 0.0, panels: 0 };
    for w in breaks.windows(2) {
        let part = integrate(&mut f, w[0], w[1], rel_tol, abs_tol)?;
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.panels += part.panels;
    }
    Ok(total)
}
