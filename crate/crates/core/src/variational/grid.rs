//! Polar grids on the annulus and the fields that live on them.
//!
//! Vectors are stored in the local `(e_r, e_phi)` frame. That frame has the
//! same orientation as the Cartesian one, so dot products, `det` and the
//! quarter turn `J` take their usual form, and rotating the grid by one
//! angular step is an exact index shift.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::annulus::Vec2;
use crate::error::{CloakError, Result};
use crate::radial::AmplitudeProfile;

const MIN_NR: usize = 8;
const MIN_NPHI: usize = 16;

/// Tensor-product grid `r_i = eps + i h_r`, `phi_j = j h_phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarGrid {
    pub n_r: usize,
    pub n_phi: usize,
    pub epsilon: f64,
    pub radii: Vec<f64>,
    pub h_r: f64,
    pub h_phi: f64,
}

impl PolarGrid {
    pub fn new(epsilon: f64, n_r: usize, n_phi: usize) -> Result<Self> {
        if n_r < MIN_NR || n_phi < MIN_NPHI {
            return Err(CloakError::InvalidParameter(format!(
                "grid must be at least {MIN_NR}x{MIN_NPHI}, got {n_r}x{n_phi}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(CloakError::InvalidParameter(format!("bad inner radius {epsilon}")));
        }
        let h_r = (1.0 - epsilon) / (n_r - 1) as f64;
        let mut radii: Vec<f64> = (0..n_r).map(|i| epsilon + h_r * i as f64).collect();
        radii[n_r - 1] = 1.0;
        Ok(Self { n_r, n_phi, epsilon, radii, h_r, h_phi: TAU / n_phi as f64 })
    }

    /// Grid with both dimensions doubled (`2 n_r - 1` radii keep the old nodes).
    pub fn refined(&self) -> Self {
        Self::new(self.epsilon, 2 * self.n_r - 1, 2 * self.n_phi).expect("refinement of a valid grid")
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_phi + j
    }

    pub fn angle(&self, j: usize) -> f64 {
        self.h_phi * j as f64
    }

    /// Cartesian position of node `(i, j)`.
    pub fn point(&self, i: usize, j: usize) -> Vec2 {
        let (s, c) = self.angle(j).sin_cos();
        [self.radii[i] * c, self.radii[i] * s]
    }

    /// Area weight of node `(i, j)`: trapezoid in `r`, rectangle in `phi`,
    /// times the Jacobian `r`.
    pub fn weight(&self, i: usize) -> f64 {
        let end = if i == 0 || i == self.n_r - 1 { 0.5 } else { 1.0 };
        end * self.h_r * self.h_phi * self.radii[i]
    }

    /// Quadrature of a node function, summed row by row in index order.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(usize, usize) -> f64 + Sync + Send,
    {
        let rows = crate::par::map_indexed(self.n_r, |i| {
            let w = self.weight(i);
            (0..self.n_phi).map(|j| f(i, j)).sum::<f64>() * w
        });
        crate::par::ordered_sum(&rows)
    }
}

/// Scalar field on a polar grid. Angle-like fields are stored as a real lift
/// with a winding number: going once around increases the value by
/// `2 pi winding`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    pub grid: PolarGrid,
    pub values: Vec<f64>,
    pub winding: i32,
}

/// Vector field in local polar components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    pub grid: PolarGrid,
    pub r: Vec<f64>,
    pub phi: Vec<f64>,
}

impl ScalarField2D {
    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: &PolarGrid, winding: i32, f: F) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.n_r {
            for j in 0..grid.n_phi {
                values.push(f(grid.radii[i], grid.angle(j)));
            }
        }
        Self { grid: grid.clone(), values, winding }
    }

    /// `u(x) = f(|x|)`.
    pub fn radial<F: Fn(f64) -> f64>(grid: &PolarGrid, f: F) -> Self {
        Self::from_fn(grid, 0, |r, _| f(r))
    }

    /// `psi = f(|x|)` for a profile on the same annulus.
    pub fn radial_lift(grid: &PolarGrid, profile: &AmplitudeProfile) -> Result<Self> {
        if profile.epsilon != grid.epsilon {
            return Err(CloakError::InvalidParameter(format!(
                "profile annulus eps = {} does not match grid eps = {}",
                profile.epsilon, grid.epsilon
            )));
        }
        let rows = grid.radii.iter().map(|&r| profile.value_at(r)).collect::<Result<Vec<_>>>()?;
        let values = rows.iter().flat_map(|&v| std::iter::repeat_n(v, grid.n_phi)).collect();
        Ok(Self { grid: grid.clone(), values, winding: 0 })
    }

    /// The lifted argument `theta = phi`, winding number one.
    pub fn angle(grid: &PolarGrid) -> Self {
        Self::from_fn(grid, 1, |_, phi| phi)
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn is_angle_lift(&self) -> bool {
        self.winding != 0
    }

    /// Value at angular index `j` taken modulo `n_phi`, carrying the winding.
    fn wrapped(&self, i: usize, j: isize) -> f64 {
        let n = self.grid.n_phi as isize;
        let turns = j.div_euclid(n);
        let jj = j.rem_euclid(n) as usize;
        self.at(i, jj) + TAU * (self.winding as f64) * turns as f64
    }

    /// Polar gradient components `(d_r u, (1/r) d_phi u)` at node `(i, j)`:
    /// central differences inside, third-order one-sided at the two circles,
    /// periodic in `phi`.
    pub fn gradient_at(&self, i: usize, j: usize) -> Vec2 {
        let g = &self.grid;
        let d_r = if i == 0 {
            {
                let a = self.at(0, j);
                (3.0 * (self.at(1, j) - a) - 1.5 * (self.at(2, j) - a) + (self.at(3, j) - a) / 3.0) / g.h_r
            }
        } else if i == g.n_r - 1 {
            {
                let a = self.at(i, j);
                (3.0 * (a - self.at(i - 1, j)) - 1.5 * (a - self.at(i - 2, j))
                    + (a - self.at(i - 3, j)) / 3.0)
                    / g.h_r
            }
        } else {
            (self.at(i + 1, j) - self.at(i - 1, j)) / (2.0 * g.h_r)
        };
        let jj = j as isize;
        let d_phi = (self.wrapped(i, jj + 1) - self.wrapped(i, jj - 1)) / (2.0 * g.h_phi);
        [d_r, d_phi / g.radii[i]]
    }

    pub fn gradient(&self) -> VectorField2D {
        let g = &self.grid;
        let mut r = Vec::with_capacity(g.len());
        let mut phi = Vec::with_capacity(g.len());
        for i in 0..g.n_r {
            for j in 0..g.n_phi {
                let d = self.gradient_at(i, j);
                r.push(d[0]);
                phi.push(d[1]);
            }
        }
        VectorField2D { grid: g.clone(), r, phi }
    }

    /// Pointwise `a u + b v`; winding numbers combine linearly.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(CloakError::InvalidParameter("fields live on different grids".into()));
        }
        let w = a * self.winding as f64 + b * other.winding as f64;
        if (w - w.round()).abs() > 1e-12 {
            return Err(CloakError::InvalidParameter(format!("combination has non-integer winding {w}")));
        }
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
            winding: w.round() as i32,
        })
    }

    /// Adds an ordinary (winding zero) field.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.winding != 0 {
            return Err(CloakError::InvalidParameter("increment must have zero winding".into()));
        }
        self.combine(1.0, other, 1.0)
    }

    /// Shifts the data by `k` angular steps (a rotation of the field by
    /// `k h_phi`); lifted values crossing the seam carry the winding.
    pub fn rotated(&self, k: usize) -> Self {
        let g = &self.grid;
        let mut values = Vec::with_capacity(g.len());
        for i in 0..g.n_r {
            for j in 0..g.n_phi {
                values.push(self.wrapped(i, j as isize - k as isize));
            }
        }
        Self { grid: g.clone(), values, winding: self.winding }
    }
}

impl VectorField2D {
    pub fn from_fn<F: Fn(f64, f64) -> Vec2>(grid: &PolarGrid, f: F) -> Self {
        let mut r = Vec::with_capacity(grid.len());
        let mut phi = Vec::with_capacity(grid.len());
        for i in 0..grid.n_r {
            for j in 0..grid.n_phi {
                let v = f(grid.radii[i], grid.angle(j));
                r.push(v[0]);
                phi.push(v[1]);
            }
        }
        Self { grid: grid.clone(), r, phi }
    }

    pub fn at(&self, i: usize, j: usize) -> Vec2 {
        let k = self.grid.index(i, j);
        [self.r[k], self.phi[k]]
    }

    /// `J v` pointwise, scaled by `sign`.
    pub fn rotated_quarter(&self, sign: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            r: self.phi.iter().map(|b| -sign * b).collect(),
            phi: self.r.iter().map(|a| sign * a).collect(),
        }
    }

    /// The weight `V = -J D theta` used when minimizing over `psi`.
    pub fn for_psi(theta: &ScalarField2D) -> Self {
        theta.gradient().rotated_quarter(-1.0)
    }

    /// The weight `V = J D psi` used when minimizing over `theta`.
    pub fn for_theta(psi: &ScalarField2D) -> Self {
        psi.gradient().rotated_quarter(1.0)
    }

    pub fn magnitude_bounds(&self) -> (f64, f64) {
        self.r
            .iter()
            .zip(&self.phi)
            .map(|(a, b)| (a * a + b * b).sqrt())
            .fold((f64::INFINITY, 0.0), |(lo, hi), m| (lo.min(m), hi.max(m)))
    }

    /// Shift by `k` angular steps; components are frame-relative, so this is
    /// a rotation of the field.
    pub fn rotated(&self, k: usize) -> Self {
        let g = &self.grid;
        let mut r = vec![0.0; g.len()];
        let mut phi = vec![0.0; g.len()];
        for i in 0..g.n_r {
            for j in 0..g.n_phi {
                let src = g.index(i, j);
                let dst = g.index(i, (j + k) % g.n_phi);
                r[dst] = self.r[src];
                phi[dst] = self.phi[src];
            }
        }
        Self { grid: g.clone(), r, phi }
    }
}
