//! Discrete Euler-Lagrange residuals for the pair `(psi, theta)`.
//!
//! With `S = |D psi|^2 + |D theta|^2`, `d = det(D psi, D theta)` and
//! `T = S / d`, a smooth minimizer makes both fluxes
//!
//! ```text
//! F_psi   = T^p (2 D psi / S + J D theta / d)
//! F_theta = T^p (2 D theta / S - J D psi / d)
//! ```
//!
//! divergence free, and `(T J D psi - 2 D theta) . e_r = 0` on the inner circle.

use serde::{Deserialize, Serialize};

use super::grid::ScalarField2D;
use crate::annulus::{cross, norm_sq, rotate, Vec2};
use crate::error::{CloakError, Result};

/// Normalized max-norm residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElResiduals {
    pub res_psi: f64,
    pub res_theta: f64,
    pub res_bc: f64,
}

impl ElResiduals {
    pub fn max(&self) -> f64 {
        self.res_psi.max(self.res_theta).max(self.res_bc)
    }
}

struct NodeFluxes {
    psi: Vec2,
    theta: Vec2,
    bc: Vec2,
}

fn fluxes(dpsi: Vec2, dtheta: Vec2, p: f64) -> Result<NodeFluxes> {
    let s = norm_sq(dpsi) + norm_sq(dtheta);
    let d = cross(dpsi, dtheta);
    if !(d > 0.0) {
        return Err(CloakError::Orientation { det: d });
    }
    let t = s / d;
    let tp = t.powf(p);
    let jdt = rotate(dtheta);
    let jdp = rotate(dpsi);
    Ok(NodeFluxes {
        psi: [tp * (2.0 * dpsi[0] / s + jdt[0] / d), tp * (2.0 * dpsi[1] / s + jdt[1] / d)],
        theta: [tp * (2.0 * dtheta[0] / s - jdp[0] / d), tp * (2.0 * dtheta[1] / s - jdp[1] / d)],
        bc: [t * jdp[0] - 2.0 * dtheta[0], t * jdp[1] - 2.0 * dtheta[1]],
    })
}

/// The `psi` flux written with exponent `p - 1`, as it arises from
/// differentiating `F_p` with `V = -J D theta`:
/// `T^(p-1) (2 D psi / d - T V / d)`.
pub fn psi_flux_from_differential(dpsi: Vec2, dtheta: Vec2, p: f64) -> Vec2 {
    let s = norm_sq(dpsi) + norm_sq(dtheta);
    let d = cross(dpsi, dtheta);
    let t = s / d;
    let v = [-rotate(dtheta)[0], -rotate(dtheta)[1]];
    let tp = t.powf(p - 1.0);
    [tp * (2.0 * dpsi[0] / d - t * v[0] / d), tp * (2.0 * dpsi[1] / d - t * v[1] / d)]
}

/// The same flux in the divergence form with exponent `p`.
pub fn psi_flux(dpsi: Vec2, dtheta: Vec2, p: f64) -> Result<Vec2> {
    Ok(fluxes(dpsi, dtheta, p)?.psi)
}

/// Residuals of the two divergence equations and the inner boundary
/// condition, each normalized by the largest magnitude of the corresponding
/// field. Divergences use `(1/r) d_r(r F_r) + (1/r) d_phi F_phi` with central
/// differences, at the rings whose stencil sees only central gradients.
pub fn el_residual_2d(psi: &ScalarField2D, theta: &ScalarField2D, p: f64) -> Result<ElResiduals> {
    if psi.grid != theta.grid {
        return Err(CloakError::InvalidParameter("psi and theta use different grids".into()));
    }
    let g = &psi.grid;
    let rows = crate::par::try_map_indexed(g.n_r, |i| {
        (0..g.n_phi)
            .map(|j| fluxes(psi.gradient_at(i, j), theta.gradient_at(i, j), p))
            .collect::<Result<Vec<_>>>()
    })?;
    let at = |i: usize, j: usize| &rows[i][j % g.n_phi];

    let mut max_psi: f64 = 0.0;
    let mut max_theta: f64 = 0.0;
    for row in &rows {
        for f in row {
            max_psi = max_psi.max(norm_sq(f.psi).sqrt());
            max_theta = max_theta.max(norm_sq(f.theta).sqrt());
        }
    }

    let divergence = |pick: &dyn Fn(&NodeFluxes) -> Vec2, i: usize, j: usize| {
        let r = g.radii[i];
        let out = g.radii[i + 1] * pick(at(i + 1, j))[0];
        let inn = g.radii[i - 1] * pick(at(i - 1, j))[0];
        let jp = (j + 1) % g.n_phi;
        let jm = (j + g.n_phi - 1) % g.n_phi;
        let ang = pick(at(i, jp))[1] - pick(at(i, jm))[1];
        (out - inn) / (2.0 * g.h_r * r) + ang / (2.0 * g.h_phi * r)
    };

    let mut div_psi: f64 = 0.0;
    let mut div_theta: f64 = 0.0;
    // Rings next to the circles would mix one-sided and central gradients,
    // which costs an order of accuracy; they are skipped.
    for i in 2..g.n_r - 2 {
        for j in 0..g.n_phi {
            div_psi = div_psi.max(divergence(&|f| f.psi, i, j).abs());
            div_theta = div_theta.max(divergence(&|f| f.theta, i, j).abs());
        }
    }

    let mut bc: f64 = 0.0;
    let mut bc_scale: f64 = 0.0;
    for f in &rows[0] {
        // Radial component in the local frame.
        bc = bc.max(f.bc[0].abs());
        bc_scale = bc_scale.max(norm_sq(f.bc).sqrt());
    }

    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { num };
    Ok(ElResiduals {
        res_psi: ratio(div_psi, max_psi),
        res_theta: ratio(div_theta, max_theta),
        res_bc: ratio(bc, bc_scale),
    })
}
