//! Reference computations for the cloak test suites.
//!
//! Nothing here calls into `cloak-core`. The closed forms are transcribed
//! directly, quadrature is plain composite Simpson, and the optimal radial
//! profile is recovered by brute-force minimization of a discretized energy
//! rather than by shooting.

use std::f64::consts::{LN_2, PI};

/// `I_1(f_1) = 2 pi (1 - eps^2 + (2/3)(2 eps - 1)^2)`.
pub fn i1_f1(eps: f64) -> f64 {
    2.0 * PI * (1.0 - eps * eps + (2.0 / 3.0) * (2.0 * eps - 1.0).powi(2))
}

/// `I_1(f_ra) = 2 pi (1 - eps^2 + log 2 (2 eps - 1)^2)`.
pub fn i1_fra(eps: f64) -> f64 {
    2.0 * PI * (1.0 - eps * eps + LN_2 * (2.0 * eps - 1.0).powi(2))
}

/// `log 2 / |log eps| + |log eps| / log 2`.
pub fn i_inf(eps: f64) -> f64 {
    let l = eps.ln().abs();
    LN_2 / l + l / LN_2
}

/// `f_1(r) = log((3r + sqrt(9r^2 + 16(2-eps)(1/2-eps))) / (4(2-eps)))`.
pub fn f1(r: f64, eps: f64) -> f64 {
    let d = 16.0 * (2.0 - eps) * (0.5 - eps);
    ((3.0 * r + (9.0 * r * r + d).sqrt()) / (4.0 * (2.0 - eps))).ln()
}

/// `f_1'` by a fourth-order central difference of [`f1`].
pub fn f1_slope(r: f64, eps: f64) -> f64 {
    let h = 1e-3 * r;
    (-f1(r + 2.0 * h, eps) + 8.0 * f1(r + h, eps) - 8.0 * f1(r - h, eps) + f1(r - 2.0 * h, eps)) / (12.0 * h)
}

/// `f_ra(r) = log((r - 1)/(2(1 - eps)) + 1)`.
pub fn f_affine(r: f64, eps: f64) -> f64 {
    ((r - 1.0) / (2.0 * (1.0 - eps)) + 1.0).ln()
}

/// Composite Simpson rule with `n` (rounded up to even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2) + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// `2 pi int_eps^1 (1/(r s) + r s)^p r dr` for a slope function `s`.
pub fn radial_energy<F: Fn(f64) -> f64>(slope: F, eps: f64, p: f64, panels: usize) -> f64 {
    2.0 * PI
        * simpson(
            |r| {
                let t = r * slope(r);
                (1.0 / t + t).powf(p) * r
            },
            eps,
            1.0,
            panels,
        )
}

/// Result of [`brute_force_profile`].
#[derive(Debug, Clone)]
pub struct DiscreteMinimizer {
    pub nodes: Vec<f64>,
    pub slopes: Vec<f64>,
    pub values: Vec<f64>,
    pub iterations: usize,
    pub stationarity: f64,
}

fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    w
}

// phi(g) = (1/(r g) + r g)^p r and its first two derivatives in g.
fn phi(r: f64, g: f64, p: f64) -> (f64, f64, f64) {
    let t = 1.0 / (r * g) + r * g;
    let dt = r - 1.0 / (r * g * g);
    let ddt = 2.0 / (r * g * g * g);
    let v = t.powf(p) * r;
    let d1 = p * t.powf(p - 1.0) * dt * r;
    let d2 = (p * (p - 1.0) * t.powf(p - 2.0) * dt * dt + p * t.powf(p - 1.0) * ddt) * r;
    (v, d1, d2)
}

/// Minimizes the trapezoid energy `sum w_i (1/(r_i g_i) + r_i g_i)^p r_i`
/// over slope vectors with `g_i > 0` and `sum w_i g_i = log 2`, on `n`
/// uniform nodes.
///
/// Projected gradient descent in the metric `diag(w_i phi_i'')`: the step
/// is the gradient with its weighted mean removed, so the linear constraint
/// is kept exactly, and backtracking keeps the slopes positive and the
/// energy decreasing (Armijo). Iterates until the projected gradient is
/// below `1e-10` relative.
pub fn brute_force_profile(eps: f64, p: f64, n: usize) -> DiscreteMinimizer {
    let h = (1.0 - eps) / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n).map(|i| if i + 1 == n { 1.0 } else { eps + h * i as f64 }).collect();
    let w = trapezoid_weights(n, h);
    let energy = |g: &[f64]| -> f64 { (0..n).map(|i| w[i] * phi(nodes[i], g[i], p).0).sum() };

    // Start from c / r, scaled onto the constraint.
    let raw: Vec<f64> = nodes.iter().map(|r| 1.0 / r).collect();
    let total: f64 = raw.iter().zip(&w).map(|(g, w)| g * w).sum();
    let mut g: Vec<f64> = raw.iter().map(|x| x * LN_2 / total).collect();

    let mut iterations = 0;
    let mut stationarity = f64::INFINITY;
    let w_sum: f64 = w.iter().sum();
    while iterations < 10_000 {
        let derivs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let (_, d1, d2) = phi(nodes[i], g[i], p);
                (d1, d2)
            })
            .collect();
        let mean = (0..n).map(|i| w[i] * derivs[i].0).sum::<f64>() / w_sum;
        stationarity = derivs.iter().map(|d| (d.0 - mean).abs()).fold(0.0, f64::max) / (1.0 + mean.abs());
        if stationarity <= 1e-10 {
            break;
        }
        let num: f64 = (0..n).map(|i| w[i] * derivs[i].0 / derivs[i].1).sum();
        let den: f64 = (0..n).map(|i| w[i] / derivs[i].1).sum();
        let mu = num / den;
        let step: Vec<f64> = derivs.iter().map(|(d1, d2)| -(d1 - mu) / d2).collect();
        let slope: f64 = (0..n).map(|i| w[i] * derivs[i].0 * step[i]).sum();
        let e0 = energy(&g);
        let mut alpha = 1.0;
        loop {
            let trial: Vec<f64> = g.iter().zip(&step).map(|(x, s)| x + alpha * s).collect();
            if trial.iter().all(|&x| x > 0.0) && energy(&trial) <= e0 + 1e-4 * alpha * slope {
                g = trial;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-20 {
                break;
            }
        }
        iterations += 1;
        if alpha < 1e-20 {
            break;
        }
    }

    let mut values = vec![-LN_2; n];
    for i in 1..n {
        values[i] = values[i - 1] + 0.5 * (g[i - 1] + g[i]) * (nodes[i] - nodes[i - 1]);
    }
    DiscreteMinimizer { nodes, slopes: g, values, iterations, stationarity }
}

/// `(1/2) sinh(1/2) eps^2`: the inner-hole bound for `Psi^-1 = sinh`, using
/// `|sinh''| = |sinh|`, largest on the closed disk of radius 1/2 at `z = 1/2`.
pub fn sinh_hole_bound(eps: f64) -> f64 {
    0.5 * 0.5f64.sinh() * eps * eps
}
