//! Annulus geometry, push-forward tensors and the trace formulas.
//!
//! A transformation `Phi = exp(psi) (cos theta, sin theta)` of the annulus
//! `eps <= |x| <= 1` onto `1/2 <= |x| <= 1` pushes the identity conductivity
//! forward to `D Phi D Phi^T / |det D Phi|`. In two dimensions that tensor has
//! unit determinant, so its anisotropy `lambda_2 - lambda_1` is a function of
//! its trace alone.

use serde::{Deserialize, Serialize};

use crate::error::{CloakError, Result};

/// Plain 2-vector.
pub type Vec2 = [f64; 2];
/// Row-major 2x2 matrix.
pub type Mat2 = [[f64; 2]; 2];

const SINGULAR_DET: f64 = 1e-14;
const ISOTROPY_CLAMP: f64 = 1e-12;

/// Radius of the hole after the transformation.
pub const TARGET_INNER: f64 = 0.5;
/// Outer radius, fixed by the transformation.
pub const OUTER: f64 = 1.0;

/// The source annulus `eps <= |x| <= 1` and its fixed target `1/2 <= |x| <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    epsilon: f64,
}

impl AnnulusSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= TARGET_INNER) {
            return Err(CloakError::InvalidParameter(format!("epsilon must lie in (0, 1/2], got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn target_inner(&self) -> f64 {
        TARGET_INNER
    }

    pub fn outer(&self) -> f64 {
        OUTER
    }

    /// `eps = 1/2`: the optimal map is the identity.
    pub fn is_degenerate(&self) -> bool {
        self.epsilon == TARGET_INNER
    }

    /// Area of the source annulus.
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * (1.0 - self.epsilon * self.epsilon)
    }
}

/// Exponent of the anisotropy energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "lowercase")]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(CloakError::InvalidParameter(format!("p must be a finite real >= 1, got {p}")));
        }
        Ok(PNorm::Finite(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PNorm::Infinity)
    }

    pub fn as_finite(&self) -> Option<f64> {
        match self {
            PNorm::Finite(p) => Some(*p),
            PNorm::Infinity => None,
        }
    }
}

impl std::fmt::Display for PNorm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PNorm::Finite(p) => write!(f, "{p}"),
            PNorm::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for PNorm {
    type Err = CloakError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(PNorm::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| CloakError::InvalidParameter(format!("cannot parse p = {s:?}")))?;
                PNorm::finite(p)
            }
        }
    }
}

/// Symmetric 2x2 tensor `[[a, b], [b, c]]` with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PushForwardTensor {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl PushForwardTensor {
    pub const IDENTITY: Self = Self { a: 1.0, b: 0.0, c: 1.0 };

    pub fn trace(&self) -> f64 {
        self.a + self.c
    }

    pub fn det(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }

    /// `(lambda_1, lambda_2)` with `lambda_1 <= 1 <= lambda_2`, from the
    /// trace/determinant closed form.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let tr = self.trace();
        let half_gap = 0.5 * clamped_sqrt(tr * tr - 4.0 * self.det());
        (0.5 * tr - half_gap, 0.5 * tr + half_gap)
    }

    pub fn as_matrix(&self) -> Mat2 {
        [[self.a, self.b], [self.b, self.c]]
    }

    /// `Q^T A Q` for an orthogonal `Q`.
    pub fn conjugate_by(&self, q: &Mat2) -> Self {
        let m = mat_mul(&mat_mul(&transpose(q), &self.as_matrix()), q);
        Self { a: m[0][0], b: 0.5 * (m[0][1] + m[1][0]), c: m[1][1] }
    }
}

fn clamped_sqrt(x: f64) -> f64 {
    if x.abs() <= ISOTROPY_CLAMP {
        0.0
    } else {
        x.max(0.0).sqrt()
    }
}

/// The rotation by a quarter turn.
pub const J: Mat2 = [[0.0, -1.0], [1.0, 0.0]];

pub fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn transpose(m: &Mat2) -> Mat2 {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub fn mat_vec(m: &Mat2, v: Vec2) -> Vec2 {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

pub fn dot(u: Vec2, v: Vec2) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

pub fn cross(u: Vec2, v: Vec2) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

pub fn norm_sq(v: Vec2) -> f64 {
    dot(v, v)
}

/// `J v`.
pub fn rotate(v: Vec2) -> Vec2 {
    [-v[1], v[0]]
}

/// Gradients of the log-amplitude `psi` and of the lifted angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientPair {
    pub d_psi: Vec2,
    pub d_theta: Vec2,
}

impl GradientPair {
    pub fn new(d_psi: Vec2, d_theta: Vec2) -> Self {
        Self { d_psi, d_theta }
    }

    /// `x / |x|`.
    pub fn e_r(x: Vec2) -> Vec2 {
        let n = norm_sq(x).sqrt();
        [x[0] / n, x[1] / n]
    }

    /// `J x / |x|`.
    pub fn e_theta(x: Vec2) -> Vec2 {
        rotate(Self::e_r(x))
    }

    /// Gradients of `(f(|x|), arg x)` at `x`: `D psi = f' e_r`, `D theta = e_theta / |x|`.
    pub fn radial(x: Vec2, fprime: f64) -> Self {
        let r = norm_sq(x).sqrt();
        let er = Self::e_r(x);
        let et = rotate(er);
        Self { d_psi: [fprime * er[0], fprime * er[1]], d_theta: [et[0] / r, et[1] / r] }
    }

    /// `det(D psi, D theta)`.
    pub fn det(&self) -> f64 {
        cross(self.d_psi, self.d_theta)
    }

    /// Magnitudes and the oriented angle from `D psi` to `D theta`.
    pub fn polar_form(&self) -> (f64, f64, f64) {
        let mp = norm_sq(self.d_psi).sqrt();
        let mt = norm_sq(self.d_theta).sqrt();
        let angle = self.det().atan2(dot(self.d_psi, self.d_theta));
        (mp, mt, angle)
    }

    /// `D Phi / |Phi| = phi D psi^T + (J phi) D theta^T` for direction `phi = (cos theta, sin theta)`.
    pub fn scaled_jacobian(&self, theta: f64) -> Mat2 {
        let phi = [theta.cos(), theta.sin()];
        let jphi = rotate(phi);
        let row = |i: usize| [0, 1].map(|j| phi[i] * self.d_psi[j] + jphi[i] * self.d_theta[j]);
        [row(0), row(1)]
    }
}

/// `D Phi D Phi^T / |det D Phi|`.
pub fn push_forward_tensor(d_phi: &Mat2) -> Result<PushForwardTensor> {
    let det = det2(d_phi);
    if !(det.abs() >= SINGULAR_DET) {
        return Err(CloakError::SingularMatrix { det });
    }
    let scale = 1.0 / det.abs();
    let [[p, q], [r, s]] = *d_phi;
    Ok(PushForwardTensor {
        a: (p * p + q * q) * scale,
        b: (p * r + q * s) * scale,
        c: (r * r + s * s) * scale,
    })
}

/// `(|D psi|^2 + |D theta|^2) / det(D psi, D theta)`.
pub fn trace_from_gradients(g: &GradientPair) -> Result<f64> {
    let det = g.det();
    if !(det > 0.0) {
        return Err(CloakError::Orientation { det });
    }
    Ok((norm_sq(g.d_psi) + norm_sq(g.d_theta)) / det)
}

/// The trace written through gradient magnitudes and the angle between them.
pub fn trace_angle_form(mag_psi: f64, mag_theta: f64, angle: f64) -> Result<f64> {
    if !(mag_psi > 0.0 && mag_theta > 0.0) {
        return Err(CloakError::InvalidParameter(format!(
            "gradient magnitudes must be positive, got {mag_psi} and {mag_theta}"
        )));
    }
    let sin = angle.sin();
    if !(sin.abs() >= SINGULAR_DET) {
        return Err(CloakError::DegenerateAngle { sin });
    }
    Ok((mag_theta / mag_psi + mag_psi / mag_theta) / sin.abs())
}

/// `lambda_2 - lambda_1 = sqrt(trace^2 - 4)`.
pub fn anisotropy_measure(t: &PushForwardTensor) -> f64 {
    anisotropy_from_trace(t.trace())
}

pub fn anisotropy_from_trace(trace: f64) -> f64 {
    clamped_sqrt(trace * trace - 4.0)
}

/// Trace for a radial transformation: `1/(r f') + r f'`.
pub fn radial_trace(r: f64, fprime: f64) -> Result<f64> {
    if !(fprime > 0.0) {
        return Err(CloakError::NonPositiveSlope { r, slope: fprime });
    }
    if !(r > 0.0) {
        return Err(CloakError::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    let t = r * fprime;
    Ok(1.0 / t + t)
}
