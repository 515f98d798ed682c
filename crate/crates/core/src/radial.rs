//! Radial transformations `x -> exp(f(|x|)) x/|x|`.
//!
//! Everything here is a function of the log-amplitude profile `f` on
//! `[eps, 1]` with `f(eps) = -log 2`, `f(1) = 0` and `f' > 0`. The pointwise
//! trace of the push-forward is `1/(r f') + r f'`, so all energies depend on
//! the slope alone; profiles therefore carry slopes as primary data.
//!
//! The minimizer of `I_p(f) = 2 pi int (1/(r f') + r f')^p r dr` solves
//! `G(r f') = C / r^2` with `G(t) = (1/t + t)^(p-1) (1 - 1/t^2)`; the constant
//! `C <= 0` is found by shooting on the boundary condition at `r = 1`.

use std::f64::consts::{LN_2, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::annulus::{radial_trace, AnnulusSpec, PNorm};
use crate::error::{CloakError, Result};
use crate::quadrature::{integrate, integrate_piecewise, Integral};
use crate::roots::{bisect, newton_bisect};

/// Default tolerance for root finding.
pub const ROOT_TOL: f64 = 1e-10;
/// Default relative tolerance for energy quadrature.
pub const QUAD_TOL: f64 = 1e-9;

const MIN_NODES: usize = 16;
const SHOOTING_MAX_ITER: usize = 200;
const INVERSE_MAX_ITER: usize = 200;
// Quadrature tolerance used inside the shooting loop and for node values.
const INNER_QUAD_TOL: f64 = 1e-14;

/// Which family a profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    /// Minimizer of `I_p`.
    Optimal { p: f64 },
    /// The radial affine map.
    Affine,
    /// Closed-form minimizer of `I_1`.
    P1ClosedForm,
    /// `f_inf = (log 2 / |log eps|) log r`, the minimizer of the sup-norm energy.
    Minimax,
    /// Piecewise-linear slopes through the node values.
    Custom,
}

impl ProfileKind {
    pub fn label(&self) -> String {
        match self {
            ProfileKind::Optimal { p } => format!("f_{p}"),
            ProfileKind::Affine => "f_ra".into(),
            ProfileKind::P1ClosedForm => "f_1".into(),
            ProfileKind::Minimax => "f_inf".into(),
            ProfileKind::Custom => "custom".into(),
        }
    }
}

/// A sampled log-amplitude profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeProfile {
    pub epsilon: f64,
    pub kind: ProfileKind,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    pub shooting_constant: Option<f64>,
}

/// Energy of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub p: PNorm,
    pub value: f64,
    pub quadrature_error_estimate: f64,
    pub profile_kind: ProfileKind,
}

/// `G(t) = (1/t + t)^(p-1) (1 - 1/t^2)`.
pub fn g_function(t: f64, p: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(CloakError::Domain(format!("G requires t > 0, got {t}")));
    }
    Ok(g_unchecked(t, p))
}

fn g_unchecked(t: f64, p: f64) -> f64 {
    let sum = 1.0 / t + t;
    let diff = 1.0 - 1.0 / (t * t);
    if p == 1.0 {
        diff
    } else {
        sum.powf(p - 1.0) * diff
    }
}

/// `G'(t)`; strictly positive for `p >= 1`.
pub fn g_derivative(t: f64, p: f64) -> f64 {
    let sum = 1.0 / t + t;
    let diff = 1.0 - 1.0 / (t * t);
    let curv = 2.0 / (t * t * t);
    if p == 1.0 {
        curv
    } else {
        (p - 1.0) * sum.powf(p - 2.0) * diff * diff + sum.powf(p - 1.0) * curv
    }
}

/// Solves `G(t) = s` for `t > 0`.
///
/// For `p = 1`, `G` maps onto `(-inf, 1)` only and the closed form
/// `t = (1 - s)^(-1/2)` is used.
pub fn g_inverse(s: f64, p: f64, tol: f64) -> Result<f64> {
    check_p(p)?;
    if s == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 {
        if s >= 1.0 {
            return Err(CloakError::Range { s, p });
        }
        return Ok((1.0 - s).sqrt().recip());
    }
    g_inverse_bracketed(s, p, tol)
}

/// Bracketed Newton inversion of `G`, valid for every `p >= 1` (for `p = 1`
/// only when `s < 1`). Exposed so the closed form can be cross-checked.
pub fn g_inverse_bracketed(s: f64, p: f64, tol: f64) -> Result<f64> {
    check_p(p)?;
    if !(tol > 0.0) {
        return Err(CloakError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    if p == 1.0 && s >= 1.0 {
        return Err(CloakError::Range { s, p });
    }
    if !s.is_finite() {
        return Err(CloakError::Domain(format!("G^-1 of non-finite value {s}")));
    }
    let (mut lo, mut hi) = (1.0, 1.0);
    if s > 0.0 {
        while g_unchecked(hi, p) < s {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(CloakError::Range { s, p });
            }
        }
    } else {
        while g_unchecked(lo, p) > s {
            hi = lo;
            lo *= 0.5;
            if lo == 0.0 {
                return Err(CloakError::Range { s, p });
            }
        }
    }
    let root =
        newton_bisect(|t| (g_unchecked(t, p) - s, g_derivative(t, p)), lo, hi, 1e-16, INVERSE_MAX_ITER)?;
    let t = root.x;
    let resid = (g_unchecked(t, p) - s).abs();
    // t is only known to machine precision; allow for the conditioning of G.
    let floor = 4.0 * f64::EPSILON * t * g_derivative(t, p);
    if resid > tol * (1.0 + s.abs()) + floor {
        return Err(CloakError::NonConvergence { iterations: root.iterations, lo: t, hi: t });
    }
    Ok(t)
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(CloakError::InvalidParameter(format!("p must be a finite real >= 1, got {p}")));
    }
    Ok(())
}

/// `n` uniformly spaced radii from `eps` to `1` inclusive.
pub fn uniform_nodes(epsilon: f64, n: usize) -> Vec<f64> {
    let h = (1.0 - epsilon) / (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|i| epsilon + h * i as f64).collect();
    nodes[0] = epsilon;
    nodes[n - 1] = 1.0;
    nodes
}

fn check_nodes(n: usize) -> Result<()> {
    if n < MIN_NODES {
        return Err(CloakError::InvalidParameter(format!(
            "at least {MIN_NODES} nodes are required, got {n}"
        )));
    }
    Ok(())
}

/// Slope `f'(r)` of the optimal profile with shooting constant `c`.
fn optimal_slope(r: f64, c: f64, p: f64) -> Result<f64> {
    Ok(g_inverse(c / (r * r), p, ROOT_TOL * 1e-3)? / r)
}

impl AmplitudeProfile {
    fn sample_closed_form(
        spec: &AnnulusSpec,
        n_nodes: usize,
        kind: ProfileKind,
        f: impl Fn(f64) -> f64,
        df: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        check_nodes(n_nodes)?;
        let nodes = uniform_nodes(spec.epsilon(), n_nodes);
        let values = nodes.iter().map(|&r| f(r)).collect();
        let slopes = nodes.iter().map(|&r| df(r)).collect();
        Ok(Self { epsilon: spec.epsilon(), kind, nodes, values, slopes, shooting_constant: None })
    }

    /// Builds a custom profile from node slopes, scaling them so that the
    /// piecewise-linear slope integrates to `log 2` (the boundary conditions).
    pub fn custom_normalized(epsilon: f64, nodes: Vec<f64>, raw_slopes: Vec<f64>) -> Result<Self> {
        validate_nodes(epsilon, &nodes)?;
        if raw_slopes.len() != nodes.len() {
            return Err(CloakError::InvalidParameter("slopes and nodes differ in length".into()));
        }
        if let Some(i) = raw_slopes.iter().position(|&s| !(s > 0.0)) {
            return Err(CloakError::NonPositiveSlope { r: nodes[i], slope: raw_slopes[i] });
        }
        let total = trapezoid_cumulative(&nodes, &raw_slopes);
        let scale = LN_2 / total.last().copied().unwrap_or(1.0);
        let slopes: Vec<f64> = raw_slopes.iter().map(|s| s * scale).collect();
        let values = trapezoid_cumulative(&nodes, &slopes).into_iter().map(|v| v - LN_2).collect();
        Ok(Self { epsilon, kind: ProfileKind::Custom, nodes, values, slopes, shooting_constant: None })
    }

    /// The same profile viewed as piecewise-linear slopes on its own nodes.
    pub fn to_custom(&self) -> Result<Self> {
        Self::custom_normalized(self.epsilon, self.nodes.clone(), self.slopes.clone())
    }

    /// `(f + g) / 2` on shared nodes.
    pub fn midpoint(&self, other: &Self) -> Result<Self> {
        if self.nodes != other.nodes {
            return Err(CloakError::InvalidParameter("profiles must share nodes".into()));
        }
        let slopes = self.slopes.iter().zip(&other.slopes).map(|(a, b)| 0.5 * (a + b)).collect();
        Self::custom_normalized(self.epsilon, self.nodes.clone(), slopes)
    }

    /// Exact slope at `r` in `[eps, 1]`.
    pub fn slope_at(&self, r: f64) -> Result<f64> {
        let eps = self.epsilon;
        match self.kind {
            ProfileKind::Affine => Ok(1.0 / (r + 1.0 - 2.0 * eps)),
            ProfileKind::P1ClosedForm => Ok(3.0 / (9.0 * r * r + p1_discriminant(eps)).sqrt()),
            ProfileKind::Minimax => Ok(minimax_rate(eps) / r),
            ProfileKind::Optimal { p } => match self.shooting_constant {
                Some(c) if c != 0.0 => optimal_slope(r, c, p),
                _ => Ok(1.0 / r),
            },
            ProfileKind::Custom => {
                let i = self.interval_of(r);
                let (r0, r1) = (self.nodes[i], self.nodes[i + 1]);
                let w = (r - r0) / (r1 - r0);
                Ok(self.slopes[i] * (1.0 - w) + self.slopes[i + 1] * w)
            }
        }
    }

    /// Value `f(r)` for `r` in `[eps, 1]`.
    pub fn value_at(&self, r: f64) -> Result<f64> {
        let eps = self.epsilon;
        match self.kind {
            ProfileKind::Affine => Ok(((r - 1.0) / (2.0 * (1.0 - eps)) + 1.0).ln()),
            ProfileKind::P1ClosedForm => Ok(p1_value(r, eps)),
            ProfileKind::Minimax => Ok(minimax_rate(eps) * r.ln()),
            ProfileKind::Optimal { .. } => {
                let i = self.interval_of(r);
                let r0 = self.nodes[i];
                if r == r0 {
                    return Ok(self.values[i]);
                }
                let mut failure = None;
                let part = integrate(
                    |t| {
                        self.slope_at(t).unwrap_or_else(|e| {
                            failure.get_or_insert(e);
                            f64::NAN
                        })
                    },
                    r0,
                    r,
                    INNER_QUAD_TOL,
                    1e-16,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                Ok(self.values[i] + part?.value)
            }
            ProfileKind::Custom => {
                let i = self.interval_of(r);
                let r0 = self.nodes[i];
                let s0 = self.slopes[i];
                let s = self.slope_at(r)?;
                Ok(self.values[i] + 0.5 * (s0 + s) * (r - r0))
            }
        }
    }

    /// Index `i` with `nodes[i] <= r <= nodes[i+1]` (clamped to the ends).
    fn interval_of(&self, r: f64) -> usize {
        let n = self.nodes.len();
        match self.nodes.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Points where the slope may fail to be smooth.
    fn breakpoints(&self) -> Vec<f64> {
        match self.kind {
            ProfileKind::Custom => self.nodes.clone(),
            _ => vec![self.epsilon, 1.0],
        }
    }

    /// Checks the node layout, slope positivity and boundary values.
    pub fn validate(&self, tol: f64) -> Result<()> {
        validate_nodes(self.epsilon, &self.nodes)?;
        if self.values.len() != self.nodes.len() || self.slopes.len() != self.nodes.len() {
            return Err(CloakError::InadmissibleProfile("array lengths differ".into()));
        }
        if let Some(i) = self.slopes.iter().position(|&s| !(s > 0.0)) {
            return Err(CloakError::NonPositiveSlope { r: self.nodes[i], slope: self.slopes[i] });
        }
        let first = self.values[0];
        let last = *self.values.last().unwrap();
        if (first + LN_2).abs() > 1e-10 {
            return Err(CloakError::InadmissibleProfile(format!("f(eps) = {first}, expected -log 2")));
        }
        if last.abs() > tol {
            return Err(CloakError::InadmissibleProfile(format!("f(1) = {last}, expected 0")));
        }
        Ok(())
    }

    fn check_slopes(&self) -> Result<()> {
        match self.slopes.iter().position(|&s| !(s > 0.0)) {
            Some(i) => Err(CloakError::InadmissibleProfile(format!(
                "slope {} at r = {} is not positive",
                self.slopes[i], self.nodes[i]
            ))),
            None => Ok(()),
        }
    }
}

fn validate_nodes(epsilon: f64, nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(CloakError::InadmissibleProfile("need at least two nodes".into()));
    }
    if nodes[0] != epsilon || *nodes.last().unwrap() != 1.0 {
        return Err(CloakError::InadmissibleProfile(format!(
            "nodes must run from eps = {epsilon} to 1, got [{}, {}]",
            nodes[0],
            nodes.last().unwrap()
        )));
    }
    if nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(CloakError::InadmissibleProfile("nodes are not strictly increasing".into()));
    }
    Ok(())
}

fn trapezoid_cumulative(nodes: &[f64], slopes: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(nodes.len());
    out.push(0.0);
    for i in 1..nodes.len() {
        acc += 0.5 * (slopes[i - 1] + slopes[i]) * (nodes[i] - nodes[i - 1]);
        out.push(acc);
    }
    out
}

fn p1_discriminant(eps: f64) -> f64 {
    16.0 * (2.0 - eps) * (0.5 - eps)
}

fn p1_value(r: f64, eps: f64) -> f64 {
    ((3.0 * r + (9.0 * r * r + p1_discriminant(eps)).sqrt()) / (4.0 * (2.0 - eps))).ln()
}

/// `log 2 / |log eps|`, the constant value of `r f_inf'(r)`.
pub fn minimax_rate(eps: f64) -> f64 {
    LN_2 / eps.ln().abs()
}

/// The minimax energy `log 2/|log eps| + |log eps|/log 2`.
pub fn minimax_energy(eps: f64) -> f64 {
    let k = minimax_rate(eps);
    k + 1.0 / k
}

/// `I_1(f_1) = 2 pi (1 - eps^2 + (2/3)(2 eps - 1)^2)`.
pub fn p1_energy_closed_form(eps: f64) -> f64 {
    2.0 * PI * (1.0 - eps * eps + (2.0 / 3.0) * (2.0 * eps - 1.0).powi(2))
}

/// `I_1(f_ra) = 2 pi (1 - eps^2 + log 2 (2 eps - 1)^2)`.
pub fn affine_energy_closed_form(eps: f64) -> f64 {
    2.0 * PI * (1.0 - eps * eps + LN_2 * (2.0 * eps - 1.0).powi(2))
}

/// The radial affine map's log-amplitude `log((r-1)/(2(1-eps)) + 1)`.
pub fn profile_affine(spec: &AnnulusSpec, n_nodes: usize) -> Result<AmplitudeProfile> {
    let eps = spec.epsilon();
    AmplitudeProfile::sample_closed_form(
        spec,
        n_nodes,
        ProfileKind::Affine,
        |r| ((r - 1.0) / (2.0 * (1.0 - eps)) + 1.0).ln(),
        |r| 1.0 / (r + 1.0 - 2.0 * eps),
    )
}

/// Closed-form minimizer of `I_1`.
pub fn profile_p1(spec: &AnnulusSpec, n_nodes: usize) -> Result<AmplitudeProfile> {
    let eps = spec.epsilon();
    AmplitudeProfile::sample_closed_form(
        spec,
        n_nodes,
        ProfileKind::P1ClosedForm,
        |r| p1_value(r, eps),
        |r| 3.0 / (9.0 * r * r + p1_discriminant(eps)).sqrt(),
    )
}

/// `f_inf(r) = (log 2 / |log eps|) log r`.
pub fn profile_minimax(spec: &AnnulusSpec, n_nodes: usize) -> Result<AmplitudeProfile> {
    let k = minimax_rate(spec.epsilon());
    AmplitudeProfile::sample_closed_form(spec, n_nodes, ProfileKind::Minimax, |r| k * r.ln(), |r| k / r)
}

/// `f(1; C) = int_eps^1 t^-1 G^-1(C/t^2) dt - log 2`.
fn shooting_defect(eps: f64, p: f64, c: f64) -> Result<f64> {
    let mut failure = None;
    let out = integrate(
        |t| match optimal_slope(t, c, p) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        eps,
        1.0,
        INNER_QUAD_TOL,
        1e-16,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(out?.value - LN_2)
}

/// Minimizer `f_p` of `I_p`, by shooting on the integrated Euler-Lagrange
/// equation `G(r f') = C / r^2`.
pub fn solve_optimal_profile(
    spec: &AnnulusSpec,
    p: f64,
    n_nodes: usize,
    tol: f64,
) -> Result<AmplitudeProfile> {
    check_p(p)?;
    check_nodes(n_nodes)?;
    if !(tol > 0.0) {
        return Err(CloakError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let eps = spec.epsilon();
    let kind = ProfileKind::Optimal { p };
    let nodes = uniform_nodes(eps, n_nodes);

    if spec.is_degenerate() {
        let values = nodes.iter().map(|r| r.ln()).collect();
        let slopes = nodes.iter().map(|r| 1.0 / r).collect();
        return Ok(AmplitudeProfile {
            epsilon: eps,
            kind,
            nodes,
            values,
            slopes,
            shooting_constant: Some(0.0),
        });
    }

    // f(1; C) increases with C, is positive at C = 0 and tends to -log 2.
    let mut c_lo = -1.0;
    let mut doublings = 0;
    while shooting_defect(eps, p, c_lo)? >= 0.0 {
        c_lo *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(CloakError::NonConvergence { iterations: doublings, lo: c_lo, hi: 0.0 });
        }
    }
    let c_hi = if doublings == 0 { 0.0 } else { 0.5 * c_lo };
    let root = bisect(
        |c| shooting_defect(eps, p, c),
        c_lo,
        c_hi,
        f64::EPSILON * c_lo.abs(),
        0.01 * tol,
        SHOOTING_MAX_ITER,
    )?;
    let c0 = root.x;

    let slopes = nodes.iter().map(|&r| optimal_slope(r, c0, p)).collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(n_nodes);
    let mut acc = -LN_2;
    values.push(acc);
    for w in nodes.windows(2) {
        let mut failure = None;
        let part = integrate(
            |t| {
                optimal_slope(t, c0, p).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    f64::NAN
                })
            },
            w[0],
            w[1],
            INNER_QUAD_TOL,
            1e-17,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        acc += part?.value;
        values.push(acc);
    }
    let end = *values.last().unwrap();
    if end.abs() > tol {
        return Err(CloakError::NonConvergence { iterations: root.iterations, lo: c0, hi: c0 });
    }
    Ok(AmplitudeProfile { epsilon: eps, kind, nodes, values, slopes, shooting_constant: Some(c0) })
}

/// `I_p(f) = 2 pi int_eps^1 (1/(r f') + r f')^p r dr`.
pub fn energy_p(profile: &AmplitudeProfile, p: f64, tol: f64) -> Result<EnergyReport> {
    check_p(p)?;
    profile.check_slopes()?;
    let mut failure = None;
    let integral: Integral = integrate_piecewise(
        |r| {
            let trace = profile.slope_at(r).and_then(|s| radial_trace(r, s));
            match trace {
                Ok(t) => t.powf(p) * r,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        &profile.breakpoints(),
        tol,
        1e-300,
    )
    .map_err(|e| failure.clone().unwrap_or(e))?;
    if let Some(e) = failure {
        return Err(CloakError::InadmissibleProfile(e.to_string()));
    }
    Ok(EnergyReport {
        p: PNorm::Finite(p),
        value: 2.0 * PI * integral.value,
        quadrature_error_estimate: 2.0 * PI * integral.error_estimate,
        profile_kind: profile.kind,
    })
}

/// `sup_r (1/(r f') + r f')`, evaluated on the profile nodes and, for
/// piecewise-linear slopes, at the interior extremum of `r f'(r)` on each
/// interval (the trace is quasi-convex in `r f'`, so these are the only
/// candidates).
pub fn energy_inf(profile: &AmplitudeProfile) -> Result<EnergyReport> {
    profile.check_slopes()?;
    let mut best = f64::NEG_INFINITY;
    for (&r, &s) in profile.nodes.iter().zip(&profile.slopes) {
        best = best.max(radial_trace(r, s)?);
    }
    if profile.kind == ProfileKind::Custom {
        for i in 0..profile.nodes.len() - 1 {
            let (r0, r1) = (profile.nodes[i], profile.nodes[i + 1]);
            let (s0, s1) = (profile.slopes[i], profile.slopes[i + 1]);
            // r s(r) = r (a + b r); vertex at r = -a / (2b).
            let b = (s1 - s0) / (r1 - r0);
            let a = s0 - b * r0;
            if b != 0.0 {
                let v = -a / (2.0 * b);
                if v > r0 && v < r1 {
                    best = best.max(radial_trace(v, profile.slope_at(v)?)?);
                }
            }
        }
    }
    Ok(EnergyReport {
        p: PNorm::Infinity,
        value: best,
        quadrature_error_estimate: 0.0,
        profile_kind: profile.kind,
    })
}

/// Spread of `q(r) = r^2 G(r f'(r))` over the nodes, relative to its mean.
/// Zero exactly when the integrated Euler-Lagrange equation holds.
pub fn el_residual(profile: &AmplitudeProfile, p: f64) -> Result<f64> {
    check_p(p)?;
    profile.check_slopes()?;
    let q: Vec<f64> =
        profile.nodes.iter().zip(&profile.slopes).map(|(&r, &s)| r * r * g_unchecked(r * s, p)).collect();
    let mean = q.iter().sum::<f64>() / q.len() as f64;
    let spread = q.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    Ok(spread / (1.0 + mean.abs()))
}

/// A random admissible profile: log-uniform positive slopes on uniform
/// nodes, rescaled to meet the boundary conditions.
pub fn random_admissible_profile<R: Rng + ?Sized>(
    spec: &AnnulusSpec,
    n_nodes: usize,
    rng: &mut R,
) -> Result<AmplitudeProfile> {
    check_nodes(n_nodes)?;
    let nodes = uniform_nodes(spec.epsilon(), n_nodes);
    let slopes = nodes.iter().map(|&r| (rng.gen_range(-1.5f64..1.5)).exp() / r).collect();
    AmplitudeProfile::custom_normalized(spec.epsilon(), nodes, slopes)
}

/// Profile selector used by the batch front ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileChoice {
    Optimal(PNorm),
    Affine,
    P1,
}

/// Builds a profile of the requested family; `Optimal(Infinity)` is `f_inf`
/// and `Optimal(1)` uses the shooting solver (not the closed form).
pub fn build_profile(
    spec: &AnnulusSpec,
    choice: ProfileChoice,
    n_nodes: usize,
    tol: f64,
) -> Result<AmplitudeProfile> {
    match choice {
        ProfileChoice::Optimal(PNorm::Infinity) => profile_minimax(spec, n_nodes),
        ProfileChoice::Optimal(PNorm::Finite(p)) => solve_optimal_profile(spec, p, n_nodes, tol),
        ProfileChoice::Affine => profile_affine(spec, n_nodes),
        ProfileChoice::P1 => profile_p1(spec, n_nodes),
    }
}
