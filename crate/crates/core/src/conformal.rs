//! Transfer of radial cloaks to simply connected domains.
//!
//! An [`AnalyticMap`] is a conformal bijection `Psi` from a domain `Omega`
//! onto the unit disk with `Psi(0) = 0` and `Psi'(0) = a > 0`. Conjugating a
//! radial cloak `Phi` by it gives `Psi_eps = Psi^-1 o Phi o Psi`, which is the
//! identity on the boundary of `Omega` and maps `omega_eps = Psi^-1(B_eps)`
//! onto `omega_{1/2}`. Because `D Psi` is a scaled rotation, the push-forward
//! of `Psi_eps` has the same trace as that of `Phi` at the corresponding
//! point.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::annulus::{push_forward_tensor, Mat2, PushForwardTensor, Vec2};
use crate::error::{CloakError, Result};
use crate::quadrature::gauss_legendre7_points;
use crate::radial::AmplitudeProfile;
use crate::variational::PolarGrid;

/// Relative tolerance on `|Psi(x)|` at the two circles.
pub const ANNULUS_SLACK: f64 = 1e-9;
/// Smallest finite-difference step before giving up near a boundary.
pub const MIN_FD_STEP: f64 = 1e-9;

const NEWTON_STEPS: usize = 16;
const NEWTON_MAX_ITER: usize = 60;

/// Built-in conformal maps, described by the disk-to-domain map `Psi^-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum AnalyticMap {
    Identity,
    /// `Omega = sinh(B_1)`; `Psi` is the principal `asinh`.
    SinhDomain,
    /// `Psi^-1(w) = w + c w^k`, univalent on the disk when `|c| k < 1`.
    PerturbedPower {
        c_re: f64,
        c_im: f64,
        k: u32,
    },
    /// `Psi^-1 = outer^-1 o inner^-1`, i.e. `Psi = inner o outer`.
    Composite {
        outer: Box<AnalyticMap>,
        inner: Box<AnalyticMap>,
    },
}

/// Names accepted by [`AnalyticMap::builtin`].
pub const BUILTIN_MAPS: [&str; 4] = ["identity", "sinh", "perturbed_power", "sinh_power"];

fn to_c(x: Vec2) -> Complex64 {
    Complex64::new(x[0], x[1])
}

fn to_v(z: Complex64) -> Vec2 {
    [z.re, z.im]
}

/// Real 2x2 matrix of multiplication by `w`.
pub fn complex_matrix(w: Complex64) -> Mat2 {
    [[w.re, -w.im], [w.im, w.re]]
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    crate::annulus::mat_mul(a, b)
}

impl AnalyticMap {
    pub fn perturbed_power(c: Complex64, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(CloakError::InvalidParameter(format!("power k must be >= 2, got {k}")));
        }
        let size = c.norm() * f64::from(k);
        if !(size < 1.0) {
            return Err(CloakError::InvalidParameter(format!(
                "|c| k = {size} must be below 1 for univalence"
            )));
        }
        Ok(AnalyticMap::PerturbedPower { c_re: c.re, c_im: c.im, k })
    }

    /// Composition validated by a round trip on sample points of the disk.
    pub fn composite(outer: AnalyticMap, inner: AnalyticMap) -> Result<Self> {
        let map = AnalyticMap::Composite { outer: Box::new(outer), inner: Box::new(inner) };
        map.check_round_trip(24, 8, 1e-12)?;
        Ok(map)
    }

    /// Looks up a built-in map by name; `sinh_power` is `z + 0.1 z^3`
    /// applied after `sinh`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(AnalyticMap::Identity),
            "sinh" | "sinh_domain" => Ok(AnalyticMap::SinhDomain),
            "perturbed_power" => Self::perturbed_power(Complex64::new(0.2, 0.0), 2),
            "sinh_power" => {
                Self::composite(Self::perturbed_power(Complex64::new(0.1, 0.0), 3)?, AnalyticMap::SinhDomain)
            }
            other => Err(CloakError::InvalidParameter(format!(
                "unknown map '{other}'; built-in maps are {}",
                BUILTIN_MAPS.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            AnalyticMap::Identity => "identity".into(),
            AnalyticMap::SinhDomain => "sinh".into(),
            AnalyticMap::PerturbedPower { c_re, c_im, k } => {
                format!("perturbed_power(c={c_re}{c_im:+}i,k={k})")
            }
            AnalyticMap::Composite { outer, inner } => format!("{}*{}", outer.name(), inner.name()),
        }
    }

    /// `Psi^-1(w)`, the disk-to-domain map.
    pub fn from_disk(&self, w: Complex64) -> Complex64 {
        match self {
            AnalyticMap::Identity => w,
            AnalyticMap::SinhDomain => w.sinh(),
            AnalyticMap::PerturbedPower { c_re, c_im, k } => w + Complex64::new(*c_re, *c_im) * w.powu(*k),
            AnalyticMap::Composite { outer, inner } => outer.from_disk(inner.from_disk(w)),
        }
    }

    /// `(Psi^-1)'(w)`.
    pub fn from_disk_derivative(&self, w: Complex64) -> Complex64 {
        match self {
            AnalyticMap::Identity => Complex64::new(1.0, 0.0),
            AnalyticMap::SinhDomain => w.cosh(),
            AnalyticMap::PerturbedPower { c_re, c_im, k } => {
                1.0 + Complex64::new(*c_re, *c_im) * (*k as f64) * w.powu(*k - 1)
            }
            AnalyticMap::Composite { outer, inner } => {
                let v = inner.from_disk(w);
                outer.from_disk_derivative(v) * inner.from_disk_derivative(w)
            }
        }
    }

    /// `Psi(z)`, the domain-to-disk map.
    pub fn to_disk(&self, z: Complex64) -> Result<Complex64> {
        match self {
            AnalyticMap::Identity => Ok(z),
            AnalyticMap::SinhDomain => {
                if z.re.abs() <= 1e-15 * (1.0 + z.im.abs()) && z.im.abs() >= 1.0 {
                    return Err(CloakError::Branch(format!("asinh is discontinuous across the cut at {z}")));
                }
                Ok(z.asinh())
            }
            AnalyticMap::PerturbedPower { .. } => self.newton_inverse(z),
            AnalyticMap::Composite { outer, inner } => inner.to_disk(outer.to_disk(z)?),
        }
    }

    /// `Psi'(z) = 1 / (Psi^-1)'(Psi(z))`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(1.0 / self.from_disk_derivative(self.to_disk(z)?))
    }

    /// The normalization constant `a = Psi'(0)`.
    pub fn scale(&self) -> f64 {
        (1.0 / self.from_disk_derivative(Complex64::new(0.0, 0.0))).re
    }

    // Newton's method on Psi^-1(w) = z, continued along the segment 0 -> z.
    fn newton_inverse(&self, z: Complex64) -> Result<Complex64> {
        let mut w = Complex64::new(0.0, 0.0);
        for step in 1..=NEWTON_STEPS {
            let target = z * (step as f64 / NEWTON_STEPS as f64);
            let mut converged = false;
            for _ in 0..NEWTON_MAX_ITER {
                let d = self.from_disk_derivative(w);
                if d.norm() < 1e-14 {
                    return Err(CloakError::Branch(format!("critical point near {w} inverting at {z}")));
                }
                let delta = (self.from_disk(w) - target) / d;
                w -= delta;
                if delta.norm() <= 1e-15 * (1.0 + w.norm()) {
                    converged = true;
                    break;
                }
            }
            if !converged && step == NEWTON_STEPS {
                return Err(CloakError::Branch(format!("Newton inversion did not converge at {z}")));
            }
        }
        Ok(w)
    }

    /// Checks `|Psi(Psi^-1(w)) - w| <= tol` on `n_rings x n_angles` points
    /// of the open disk.
    pub fn check_round_trip(&self, n_angles: usize, n_rings: usize, tol: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..n_rings {
            let rho = (i as f64 + 0.5) / n_rings as f64;
            for j in 0..n_angles {
                let w = Complex64::from_polar(rho, TAU * j as f64 / n_angles as f64);
                let back = self.to_disk(self.from_disk(w))?;
                worst = worst.max((back - w).norm());
            }
        }
        if worst > tol {
            return Err(CloakError::Branch(format!(
                "{} fails the round trip: error {worst:e} exceeds {tol:e}",
                self.name()
            )));
        }
        Ok(worst)
    }
}

/// The conjugated cloak `Psi_eps = Psi^-1 o Phi_eps o Psi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedCloakMap {
    pub analytic: AnalyticMap,
    pub profile: AmplitudeProfile,
}

impl ComposedCloakMap {
    pub fn new(analytic: AnalyticMap, profile: AmplitudeProfile) -> Self {
        Self { analytic, profile }
    }

    pub fn epsilon(&self) -> f64 {
        self.profile.epsilon
    }

    // Psi(x), checked to lie in the reference annulus, and its modulus
    // clamped onto [eps, 1].
    fn reference_point(&self, x: Complex64) -> Result<(Complex64, f64)> {
        let y = self.analytic.to_disk(x)?;
        let rho = y.norm();
        let eps = self.epsilon();
        if !(rho >= eps * (1.0 - ANNULUS_SLACK) && rho <= 1.0 + ANNULUS_SLACK) {
            return Err(CloakError::OutOfAnnulus { modulus: rho, inner: eps });
        }
        Ok((y, rho.clamp(eps, 1.0)))
    }

    /// The radial cloak `Phi(y) = exp(f(|y|)) y / |y|` in reference coordinates.
    pub fn radial_image(&self, y: Complex64) -> Result<Complex64> {
        let rho = y.norm().clamp(self.epsilon(), 1.0);
        Ok(y / y.norm() * self.profile.value_at(rho)?.exp())
    }

    /// `Phi'` in Cartesian form at `y`:
    /// `exp(f) (f' e_r e_r^T + (1/rho) e_t e_t^T)`.
    pub fn radial_jacobian(&self, y: Complex64) -> Result<Mat2> {
        let rho = y.norm().clamp(self.epsilon(), 1.0);
        let (c, s) = (y.re / y.norm(), y.im / y.norm());
        let amp = self.profile.value_at(rho)?.exp();
        let fp = self.profile.slope_at(rho)?;
        let a = amp * fp;
        let b = amp / rho;
        Ok([[a * c * c + b * s * s, (a - b) * c * s], [(a - b) * c * s, a * s * s + b * c * c]])
    }

    /// `Psi_eps(x)`.
    pub fn evaluate(&self, x: Vec2) -> Result<Vec2> {
        let (y, _) = self.reference_point(to_c(x))?;
        Ok(to_v(self.analytic.from_disk(self.radial_image(y)?)))
    }

    /// `D Psi_eps(x)` by the chain rule through `Psi`, `Phi` and `Psi^-1`.
    pub fn jacobian(&self, x: Vec2) -> Result<Mat2> {
        let z = to_c(x);
        let (y, _) = self.reference_point(z)?;
        let outer = complex_matrix(self.analytic.from_disk_derivative(self.radial_image(y)?));
        let inner = complex_matrix(1.0 / self.analytic.from_disk_derivative(y));
        Ok(mul(&outer, &mul(&self.radial_jacobian(y)?, &inner)))
    }

    /// Push-forward of the identity at `x` from the analytic Jacobian.
    pub fn pushforward_tensor_at(&self, x: Vec2) -> Result<PushForwardTensor> {
        push_forward_tensor(&self.jacobian(x)?)
    }

    /// The radial tensor `(Phi)_*[I]` at `Psi(x)` conjugated by the rotation
    /// part of `(Psi^-1)'` at `Phi(Psi(x))`. By conformality this equals
    /// [`Self::pushforward_tensor_at`].
    pub fn conjugated_radial_tensor(&self, x: Vec2) -> Result<PushForwardTensor> {
        let (y, _) = self.reference_point(to_c(x))?;
        let radial = push_forward_tensor(&self.radial_jacobian(y)?)?;
        let d = self.analytic.from_disk_derivative(self.radial_image(y)?);
        // conjugate_by(q) is q^T A q, so pass the inverse rotation.
        let q = complex_matrix((d / d.norm()).conj());
        Ok(radial.conjugate_by(&q))
    }

    /// Central-difference Jacobian of `Psi_eps` with step `h`, halved until
    /// every stencil point lies in the annulus.
    pub fn jacobian_fd(&self, x: Vec2, h: f64) -> Result<Mat2> {
        let mut step = h;
        loop {
            match fd_jacobian(|p| self.evaluate(p), x, step) {
                Ok(m) => return Ok(m),
                Err(CloakError::OutOfAnnulus { .. }) if step / 2.0 >= MIN_FD_STEP => step /= 2.0,
                Err(e) => return Err(e),
            }
        }
    }

    /// Trace of the push-forward at `x` from the finite-difference Jacobian.
    pub fn pushforward_trace_at(&self, x: Vec2, h: f64) -> Result<f64> {
        Ok(push_forward_tensor(&self.jacobian_fd(x, h)?)?.trace())
    }
}

/// Central-difference Jacobian of a planar map.
pub fn fd_jacobian<F>(f: F, x: Vec2, h: f64) -> Result<Mat2>
where
    F: Fn(Vec2) -> Result<Vec2>,
{
    let xp = f([x[0] + h, x[1]])?;
    let xm = f([x[0] - h, x[1]])?;
    let yp = f([x[0], x[1] + h])?;
    let ym = f([x[0], x[1] - h])?;
    let s = 0.5 / h;
    Ok([[(xp[0] - xm[0]) * s, (yp[0] - ym[0]) * s], [(xp[1] - xm[1]) * s, (yp[1] - ym[1]) * s]])
}

/// `int trace^p (Psi_eps(x)) |det D Psi(x)| dx` over `Omega \ omega_eps`.
///
/// The integral is pulled back by `x = Psi^-1(y)` and computed in polar
/// coordinates on the reference annulus: 7-point Gauss-Legendre on each
/// radial interval of `grid`, periodic trapezoid over its angles. The weight
/// `|det D Psi(x)|` and the Jacobian `|det D Psi^-1(y)|` are both evaluated.
pub fn modified_energy(m: &ComposedCloakMap, p: f64, grid: &PolarGrid) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(CloakError::InvalidParameter(format!("p must be finite and >= 1, got {p}")));
    }
    if (grid.epsilon - m.epsilon()).abs() > 0.0 {
        return Err(CloakError::InvalidParameter(format!(
            "grid eps = {} does not match the cloak eps = {}",
            grid.epsilon,
            m.epsilon()
        )));
    }
    let rows = crate::par::try_map_indexed(grid.n_r - 1, |i| {
        let mut sum = 0.0;
        for (r, w) in gauss_legendre7_points(grid.radii[i], grid.radii[i + 1]) {
            let mut ring = 0.0;
            for j in 0..grid.n_phi {
                let y = Complex64::from_polar(r, grid.angle(j));
                let x = m.analytic.from_disk(y);
                let back = m.analytic.from_disk_derivative(y).norm_sqr();
                let weight = m.analytic.derivative(x)?.norm_sqr();
                let trace = m.pushforward_tensor_at(to_v(x))?.trace();
                ring += trace.powf(p) * weight * back;
            }
            sum += w * r * ring * grid.h_phi;
        }
        Ok::<_, CloakError>(sum)
    })?;
    Ok(crate::par::ordered_sum(&rows))
}

/// A ray `t e^{i phi}`, `t in [eps, 1]`, in both pictures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub angle: f64,
    /// The reference segment and its image under `Phi`.
    pub reference: Vec<Vec2>,
    pub reference_image: Vec<Vec2>,
    /// The curve `Psi^-1(t e^{i phi})` and its image under `Psi_eps`.
    pub source: Vec<Vec2>,
    pub image: Vec<Vec2>,
}

/// `n_rays` rays at angles `2 pi k / n + pi / n`, each sampled at
/// `n_points` uniform radii.
pub fn sample_rays(m: &ComposedCloakMap, n_rays: usize, n_points: usize) -> Result<Vec<Ray>> {
    if n_rays < 1 || n_points < 2 {
        return Err(CloakError::InvalidParameter(format!(
            "need at least 1 ray and 2 points, got {n_rays} and {n_points}"
        )));
    }
    let eps = m.epsilon();
    crate::par::try_map_indexed(n_rays, |k| {
        let angle = TAU * k as f64 / n_rays as f64 + std::f64::consts::PI / n_rays as f64;
        let mut ray = Ray {
            angle,
            reference: Vec::with_capacity(n_points),
            reference_image: Vec::with_capacity(n_points),
            source: Vec::with_capacity(n_points),
            image: Vec::with_capacity(n_points),
        };
        for n in 0..n_points {
            let t =
                if n + 1 == n_points { 1.0 } else { eps + (1.0 - eps) * n as f64 / (n_points - 1) as f64 };
            let y = Complex64::from_polar(t, angle);
            let fy = Complex64::from_polar(m.profile.value_at(t)?.exp(), angle);
            ray.reference.push(to_v(y));
            ray.reference_image.push(to_v(fy));
            ray.source.push(to_v(m.analytic.from_disk(y)));
            ray.image.push(to_v(m.analytic.from_disk(fy)));
        }
        Ok(ray)
    })
}

/// How far `omega_eps` is from the disk of radius `eps / a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoleDeviation {
    pub deviation: f64,
    pub second_derivative_max: f64,
    pub bound: f64,
}

/// `max_{|x| = eps} |Psi^-1(x) - x / a|` over `n_samples` points, with the
/// bound `(1/2) max_{|w| <= 1/2} |(Psi^-1)''| eps^2`. The second derivative
/// is estimated by central differences on a polar sample of the closed disk
/// of radius 1/2.
pub fn inner_hole_deviation(map: &AnalyticMap, epsilon: f64, n_samples: usize) -> Result<HoleDeviation> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(CloakError::InvalidParameter(format!("eps must lie in (0, 1/2], got {epsilon}")));
    }
    let n = n_samples.max(8);
    let a = map.scale();
    let mut deviation: f64 = 0.0;
    for j in 0..n {
        let x = Complex64::from_polar(epsilon, TAU * j as f64 / n as f64);
        deviation = deviation.max((map.from_disk(x) - x / a).norm());
    }
    let h = 1e-4;
    let second =
        |w: Complex64| (map.from_disk(w + h) - 2.0 * map.from_disk(w) + map.from_disk(w - h)) / (h * h);
    let mut second_max: f64 = 0.0;
    for i in 0..=8 {
        let rho = 0.5 * i as f64 / 8.0;
        for j in 0..n {
            let w = Complex64::from_polar(rho, TAU * j as f64 / n as f64);
            second_max = second_max.max(second(w).norm());
        }
    }
    Ok(HoleDeviation {
        deviation,
        second_derivative_max: second_max,
        bound: 0.5 * second_max * epsilon * epsilon,
    })
}
