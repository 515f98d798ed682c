//! The functional `F_p(u) = int ((|Du|^2 + |V|^2) / (Du . V))^p dx` for a
//! fixed weight field `V`, its differential, and convexity certificates.
//!
//! With `u = psi, V = -J D theta` or `u = theta, V = J D psi` the integrand is
//! the pointwise trace of the push-forward raised to the power `p`, so both
//! halves of the anisotropy problem are instances of the same functional.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::grid::{PolarGrid, ScalarField2D, VectorField2D};
use crate::annulus::{dot, norm_sq, Vec2};
use crate::error::{CloakError, Result};

fn check_same_grid(u: &ScalarField2D, v: &VectorField2D) -> Result<()> {
    if u.grid != v.grid {
        return Err(CloakError::InvalidParameter("field and weight use different grids".into()));
    }
    Ok(())
}

/// Nodes where `Du . V <= threshold`.
pub fn constraint_violations(u: &ScalarField2D, v: &VectorField2D, threshold: f64) -> Vec<(usize, usize)> {
    let g = &u.grid;
    let mut bad = Vec::new();
    for i in 0..g.n_r {
        for j in 0..g.n_phi {
            if !(dot(u.gradient_at(i, j), v.at(i, j)) > threshold) {
                bad.push((i, j));
            }
        }
    }
    bad
}

/// `min Du . V` over the grid.
pub fn min_pairing(u: &ScalarField2D, v: &VectorField2D) -> f64 {
    let g = &u.grid;
    let mut m = f64::INFINITY;
    for i in 0..g.n_r {
        for j in 0..g.n_phi {
            m = m.min(dot(u.gradient_at(i, j), v.at(i, j)));
        }
    }
    m
}

#[inline]
fn trace_of(du: Vec2, v: Vec2) -> f64 {
    (norm_sq(du) + norm_sq(v)) / dot(du, v)
}

/// `F_p(u)` by the grid quadrature (trapezoid in `r`, rectangle in `phi`).
pub fn functional_fp(u: &ScalarField2D, v: &VectorField2D, p: f64) -> Result<f64> {
    check_same_grid(u, v)?;
    let bad = constraint_violations(u, v, 0.0);
    if !bad.is_empty() {
        return Err(CloakError::Constraint { nodes: bad });
    }
    Ok(u.grid.integrate(|i, j| trace_of(u.gradient_at(i, j), v.at(i, j)).powf(p)))
}

/// Smallest value of the integrand `T^p` over the nodes.
pub fn min_integrand(u: &ScalarField2D, v: &VectorField2D, p: f64) -> Result<f64> {
    check_same_grid(u, v)?;
    let g = &u.grid;
    let mut m = f64::INFINITY;
    for i in 0..g.n_r {
        for j in 0..g.n_phi {
            let du = u.gradient_at(i, j);
            let vv = v.at(i, j);
            if !(dot(du, vv) > 0.0) {
                return Err(CloakError::Constraint { nodes: vec![(i, j)] });
            }
            m = m.min(trace_of(du, vv).powf(p));
        }
    }
    Ok(m)
}

/// Energy of the pair `(psi, theta)`: `F_p(psi)` with `V = -J D theta`.
pub fn pair_energy(psi: &ScalarField2D, theta: &ScalarField2D, p: f64) -> Result<f64> {
    functional_fp(psi, &VectorField2D::for_psi(theta), p)
}

/// Directional derivative `<DF_p(u), h>`:
/// `int p T^(p-1) (2 Du/(Du.V) - T V/(Du.V)) . Dh`, with the same discrete
/// gradient and quadrature as [`functional_fp`].
pub fn fp_gateaux(u: &ScalarField2D, v: &VectorField2D, p: f64, h: &ScalarField2D) -> Result<f64> {
    check_same_grid(u, v)?;
    if h.grid != u.grid {
        return Err(CloakError::InvalidParameter("direction uses a different grid".into()));
    }
    let bad = constraint_violations(u, v, 0.0);
    if !bad.is_empty() {
        return Err(CloakError::Constraint { nodes: bad });
    }
    Ok(u.grid.integrate(|i, j| {
        let du = u.gradient_at(i, j);
        let vv = v.at(i, j);
        let dh = h.gradient_at(i, j);
        let pairing = dot(du, vv);
        let t = (norm_sq(du) + norm_sq(vv)) / pairing;
        let flux = [2.0 * du[0] / pairing - t * vv[0] / pairing, 2.0 * du[1] / pairing - t * vv[1] / pairing];
        p * t.powf(p - 1.0) * dot(flux, dh)
    }))
}

/// `int |Du|^2` on the grid.
pub fn dirichlet_energy(u: &ScalarField2D) -> f64 {
    u.grid.integrate(|i, j| norm_sq(u.gradient_at(i, j)))
}

/// Largest `|Du|` over the grid.
pub fn max_gradient(u: &ScalarField2D) -> f64 {
    let g = &u.grid;
    let mut m: f64 = 0.0;
    for i in 0..g.n_r {
        for j in 0..g.n_phi {
            m = m.max(norm_sq(u.gradient_at(i, j)).sqrt());
        }
    }
    m
}

/// Strong-convexity constant `K = 2 inf|V|^4 / (n^2 + sup|V|^2)^3`.
pub fn convexity_constant(v: &VectorField2D, gradient_bound: f64) -> f64 {
    let (lo, hi) = v.magnitude_bounds();
    2.0 * lo.powi(4) / (gradient_bound * gradient_bound + hi * hi).powi(3)
}

/// Gaps of the strong-convexity inequality along the segment `u0 -> u1`.
///
/// `gap(tau) = tau F(u0) + (1-tau) F(u1) - F(tau u0 + (1-tau) u1)
///            - tau (1-tau) K ||D(u0 - u1)||^2`
/// at `n_tau` interior points; every entry should be non-negative.
pub fn strict_convexity_probe(
    u0: &ScalarField2D,
    u1: &ScalarField2D,
    v: &VectorField2D,
    p: f64,
    n_tau: usize,
) -> Result<Vec<f64>> {
    let f0 = functional_fp(u0, v, p)?;
    let f1 = functional_fp(u1, v, p)?;
    let bound = max_gradient(u0).max(max_gradient(u1));
    let k = convexity_constant(v, bound);
    let diff = u0.combine(1.0, u1, -1.0)?;
    let dist = dirichlet_energy(&diff);
    (0..n_tau)
        .map(|m| {
            let tau = (m + 1) as f64 / (n_tau + 1) as f64;
            let mix = u0.combine(tau, u1, 1.0 - tau)?;
            let fm = functional_fp(&mix, v, p)?;
            Ok(tau * f0 + (1.0 - tau) * f1 - fm - tau * (1.0 - tau) * k * dist)
        })
        .collect()
}

/// `G_p[A](x, y) = (A/x + x/A + (x/A)(y/x)^2)^p` for `x > 0`.
pub fn gp_value(a: f64, p: f64, x: f64, y: f64) -> f64 {
    (a / x + x / a + (x / a) * (y / x) * (y / x)).powf(p)
}

/// One sample of the Hessian check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianSample {
    pub x: f64,
    pub y: f64,
    pub min_eigenvalue: f64,
    pub bound: f64,
}

/// Result of [`gp_hessian_bound_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HessianCheck {
    pub passed: bool,
    pub bound: f64,
    pub worst_ratio: f64,
    pub failures: Vec<HessianSample>,
}

/// Central-difference Hessian of `G_p[A]` at `(x, y)`.
pub fn gp_hessian_fd(a: f64, p: f64, x: f64, y: f64) -> [[f64; 2]; 2] {
    let h = 1e-4 * x.min(1.0);
    let f = |s: f64, t: f64| gp_value(a, p, s, t);
    let c = f(x, y);
    let fxx = (f(x + h, y) - 2.0 * c + f(x - h, y)) / (h * h);
    let fyy = (f(x, y + h) - 2.0 * c + f(x, y - h)) / (h * h);
    let fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
    [[fxx, fxy], [fxy, fyy]]
}

fn min_eigenvalue(m: &[[f64; 2]; 2]) -> f64 {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let big = 0.5 * tr + (0.25 * tr * tr - det).max(0.0).sqrt();
    if big > 0.0 {
        det / big
    } else {
        0.5 * tr - (0.25 * tr * tr - det).max(0.0).sqrt()
    }
}

/// Checks `D^2 G_p[A] >= 4 A^4 / (A^2 + M^2)^3` at `n_samples` random points
/// of the half disc `x > 0, x^2 + y^2 < M^2`, using finite-difference
/// Hessians. The slack allows for the finite-difference error relative to
/// the Hessian's own scale.
pub fn gp_hessian_bound_check(a: f64, m: f64, p: f64, n_samples: usize, seed: u64) -> Result<HessianCheck> {
    if !(a > 0.0 && m > 0.0 && p >= 1.0) {
        return Err(CloakError::InvalidParameter(format!(
            "need A > 0, M > 0, p >= 1; got A = {a}, M = {m}, p = {p}"
        )));
    }
    let bound = 4.0 * a.powi(4) / (a * a + m * m).powi(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut worst_ratio = f64::INFINITY;
    let mut taken = 0;
    while taken < n_samples {
        // Uniform in the half disc, keeping clear of the singular edge x = 0.
        let rho = m * rng.gen::<f64>().sqrt();
        let ang = rng.gen_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
        let (x, y) = (rho * ang.cos(), rho * ang.sin());
        if x < 1e-3 * m {
            continue;
        }
        taken += 1;
        let hess = gp_hessian_fd(a, p, x, y);
        let lam = min_eigenvalue(&hess);
        let scale = hess[0][0].abs() + hess[1][1].abs() + hess[0][1].abs();
        let slack = 1e-6 * scale;
        worst_ratio = worst_ratio.min(lam / bound);
        if lam < bound - slack {
            failures.push(HessianSample { x, y, min_eigenvalue: lam, bound });
        }
    }
    Ok(HessianCheck { passed: failures.is_empty(), bound, worst_ratio, failures })
}

/// Weight `V = (1/r) e_r`, i.e. `-J D arg`, exactly.
pub fn radial_weight(grid: &PolarGrid) -> VectorField2D {
    VectorField2D::from_fn(grid, |r, _| [1.0 / r, 0.0])
}
