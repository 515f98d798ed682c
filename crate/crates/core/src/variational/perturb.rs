//! Perturbation tests of the two optimality inequalities
//!
//! ```text
//! I_p(f_p(|x|) x/|x|) <= I_p(psi(x) x/|x|)      (psi fixed on both circles)
//! I_p(f(|x|) x/|x|)   <= I_p(f(|x|) phi(x))     (phi = arg on the outer circle)
//! ```
//!
//! Perturbations are random combinations of low-frequency smooth modes. The
//! coefficient draws are sequential and seeded; the energies are evaluated
//! in parallel and reported by perturbation index.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::functional::{fp_gateaux, functional_fp, min_pairing};
use super::grid::{PolarGrid, ScalarField2D, VectorField2D};
use crate::annulus::AnnulusSpec;
use crate::error::{CloakError, Result};
use crate::radial::{build_profile, solve_optimal_profile, ProfileChoice};

/// Radial modes per perturbation.
pub const RADIAL_MODES: usize = 3;
/// Highest angular frequency.
pub const ANGULAR_MODES: usize = 3;
/// Perturbed fields must keep `min Du . V` above this.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-6;

/// Which boundary conditions the perturbations respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationBasis {
    /// `sin(k pi (r - eps)/(1 - eps))` times a trigonometric polynomial;
    /// vanishes on both circles.
    Psi,
    /// `((1 - r)/(1 - eps))^k` times a trigonometric polynomial; vanishes on
    /// the outer circle only.
    Theta,
}

impl PerturbationBasis {
    /// Number of coefficients: each radial mode carries `1, cos m phi, sin m phi`.
    pub const fn dimension() -> usize {
        RADIAL_MODES * (1 + 2 * ANGULAR_MODES)
    }

    fn radial_mode(self, k: usize, r: f64, eps: f64) -> f64 {
        let s = (r - eps) / (1.0 - eps);
        match self {
            PerturbationBasis::Psi => (k as f64 * PI * s).sin(),
            PerturbationBasis::Theta => (1.0 - s).powi(k as i32),
        }
    }

    /// The field `sum c_n e_n`.
    pub fn field(self, grid: &PolarGrid, coeffs: &[f64]) -> Result<ScalarField2D> {
        if coeffs.len() != Self::dimension() {
            return Err(CloakError::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                Self::dimension(),
                coeffs.len()
            )));
        }
        let eps = grid.epsilon;
        Ok(ScalarField2D::from_fn(grid, 0, |r, phi| {
            let mut total = 0.0;
            let mut n = 0;
            for k in 1..=RADIAL_MODES {
                let radial = self.radial_mode(k, r, eps);
                total += coeffs[n] * radial;
                n += 1;
                for m in 1..=ANGULAR_MODES {
                    let (s, c) = (m as f64 * phi).sin_cos();
                    total += radial * (coeffs[n] * c + coeffs[n + 1] * s);
                    n += 2;
                }
            }
            total
        }))
    }

    /// Coefficients uniform in `[-1, 1]`, scaled so that `sum |c| = amplitude`,
    /// which bounds the sup norm of the field by `amplitude`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, amplitude: f64) -> Vec<f64> {
        let raw: Vec<f64> = (0..Self::dimension()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let l1: f64 = raw.iter().map(|c| c.abs()).sum();
        if l1 == 0.0 {
            return raw;
        }
        raw.iter().map(|c| amplitude * c / l1).collect()
    }
}

/// Grid and solver settings for the perturbation tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbOptions {
    pub n_r: usize,
    pub n_phi: usize,
    pub profile_nodes: usize,
    pub profile_tol: f64,
    pub retry_budget: usize,
}

impl Default for PerturbOptions {
    fn default() -> Self {
        Self { n_r: 64, n_phi: 128, profile_nodes: 400, profile_tol: 1e-10, retry_budget: 20 }
    }
}

/// A perturbed energy that fell below the baseline by more than the slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub energy: f64,
    pub deficit: f64,
}

/// Outcome of a perturbation suite.
///
/// `convexity_gap_estimates[n]` is `F(u + h_n) - F(u) - <DF(u), h_n>`, which
/// convexity of the discrete functional makes non-negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub baseline_energy: f64,
    pub perturbed_energies: Vec<(usize, f64)>,
    pub violations: Vec<Violation>,
    pub convexity_gap_estimates: Vec<f64>,
    pub slack: f64,
    pub resampled: usize,
}

impl OptimalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_inputs(p: f64, amplitude: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(CloakError::InvalidParameter(format!("p must be finite and >= 1, got {p}")));
    }
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(CloakError::InvalidParameter(format!(
            "amplitude must be finite and non-negative, got {amplitude}"
        )));
    }
    Ok(())
}

// Shared driver: `u` is perturbed, `weight(grid, u)` builds V on that grid
// from the fixed partner field.
#[allow(clippy::too_many_arguments)]
fn run_suite(
    basis: PerturbationBasis,
    u: &ScalarField2D,
    v: &VectorField2D,
    refined: (&ScalarField2D, &VectorField2D),
    p: f64,
    n_pert: usize,
    amplitude: f64,
    seed: u64,
    retry_budget: usize,
) -> Result<OptimalityReport> {
    let grid = &u.grid;
    let baseline = functional_fp(u, v, p)?;
    let fine = functional_fp(refined.0, refined.1, p)?;
    let slack = 10.0 * (baseline - fine).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut directions = Vec::with_capacity(n_pert);
    let mut resampled = 0;
    for index in 0..n_pert {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let coeffs = PerturbationBasis::sample(&mut rng, amplitude);
            let h = basis.field(grid, &coeffs)?;
            let candidate = u.add(&h)?;
            if min_pairing(&candidate, v) > ADMISSIBILITY_FLOOR {
                directions.push((h, candidate));
                break;
            }
            if attempts > retry_budget {
                return Err(CloakError::RetryBudget { index, attempts });
            }
            resampled += 1;
        }
    }

    let evaluated = crate::par::try_map_indexed(n_pert, |n| {
        let (h, candidate) = &directions[n];
        let energy = functional_fp(candidate, v, p)?;
        let slope = fp_gateaux(u, v, p, h)?;
        Ok::<_, CloakError>((energy, energy - baseline - slope))
    })?;

    let mut perturbed_energies = Vec::with_capacity(n_pert);
    let mut gaps = Vec::with_capacity(n_pert);
    let mut violations = Vec::new();
    for (index, (energy, gap)) in evaluated.into_iter().enumerate() {
        perturbed_energies.push((index, energy));
        gaps.push(gap);
        if energy < baseline - slack {
            violations.push(Violation { index, energy, deficit: baseline - energy });
        }
    }
    Ok(OptimalityReport {
        baseline_energy: baseline,
        perturbed_energies,
        violations,
        convexity_gap_estimates: gaps,
        slack,
        resampled,
    })
}

/// Perturbs `psi = f_p(|x|)` with `theta = arg` held fixed.
pub fn perturb_psi_test(
    spec: &AnnulusSpec,
    p: f64,
    n_pert: usize,
    amplitude: f64,
    seed: u64,
) -> Result<OptimalityReport> {
    perturb_psi_test_with(spec, p, n_pert, amplitude, seed, &PerturbOptions::default())
}

pub fn perturb_psi_test_with(
    spec: &AnnulusSpec,
    p: f64,
    n_pert: usize,
    amplitude: f64,
    seed: u64,
    opts: &PerturbOptions,
) -> Result<OptimalityReport> {
    check_inputs(p, amplitude)?;
    let profile = solve_optimal_profile(spec, p, opts.profile_nodes, opts.profile_tol)?;
    let grid = PolarGrid::new(spec.epsilon(), opts.n_r, opts.n_phi)?;
    let fine_grid = grid.refined();
    let psi = ScalarField2D::radial_lift(&grid, &profile)?;
    let v = VectorField2D::for_psi(&ScalarField2D::angle(&grid));
    let psi_fine = ScalarField2D::radial_lift(&fine_grid, &profile)?;
    let v_fine = VectorField2D::for_psi(&ScalarField2D::angle(&fine_grid));
    run_suite(
        PerturbationBasis::Psi,
        &psi,
        &v,
        (&psi_fine, &v_fine),
        p,
        n_pert,
        amplitude,
        seed,
        opts.retry_budget,
    )
}

/// Perturbs `theta = arg` with `psi = f(|x|)` held fixed, for the profile
/// family `f_kind`.
pub fn perturb_theta_test(
    spec: &AnnulusSpec,
    f_kind: ProfileChoice,
    p: f64,
    n_pert: usize,
    amplitude: f64,
    seed: u64,
) -> Result<OptimalityReport> {
    perturb_theta_test_with(spec, f_kind, p, n_pert, amplitude, seed, &PerturbOptions::default())
}

pub fn perturb_theta_test_with(
    spec: &AnnulusSpec,
    f_kind: ProfileChoice,
    p: f64,
    n_pert: usize,
    amplitude: f64,
    seed: u64,
    opts: &PerturbOptions,
) -> Result<OptimalityReport> {
    check_inputs(p, amplitude)?;
    let profile = build_profile(spec, f_kind, opts.profile_nodes, opts.profile_tol)?;
    let grid = PolarGrid::new(spec.epsilon(), opts.n_r, opts.n_phi)?;
    let fine_grid = grid.refined();
    let psi = ScalarField2D::radial_lift(&grid, &profile)?;
    let theta = ScalarField2D::angle(&grid);
    let v = VectorField2D::for_theta(&psi);
    let psi_fine = ScalarField2D::radial_lift(&fine_grid, &profile)?;
    let theta_fine = ScalarField2D::angle(&fine_grid);
    let v_fine = VectorField2D::for_theta(&psi_fine);
    run_suite(
        PerturbationBasis::Theta,
        &theta,
        &v,
        (&theta_fine, &v_fine),
        p,
        n_pert,
        amplitude,
        seed,
        opts.retry_budget,
    )
}
