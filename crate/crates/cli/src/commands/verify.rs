use super::Outcome;
use crate::config::RunConfig;
use crate::error::Result;
use crate::output::write_json;
use cloak_core::radial::{el_residual, solve_optimal_profile, AmplitudeProfile, ProfileChoice};
use cloak_core::variational::{
    el_residual_2d, gp_hessian_bound_check, perturb_psi_test_with, perturb_theta_test_with, OptimalityReport,
    PerturbOptions, PolarGrid, ScalarField2D,
};
use cloak_core::{AnnulusSpec, PNorm};
use serde::Serialize;
use serde_json::{json, Value};

/// Largest accepted spread of `r^2 G(r f')`.
pub const EL_RESIDUAL_MAX: f64 = 1e-8;
/// Required decrease of each 2D residual per grid doubling.
pub const REFINEMENT_FACTOR: f64 = 1.8;
/// Residuals at or below this are roundoff and count as converged.
pub const RESIDUAL_FLOOR: f64 = 1e-10;
pub const HESSIAN_SAMPLES: usize = 200;

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    p: f64,
    passed: bool,
    details: Value,
}

#[derive(Debug, Serialize)]
struct VerifyResults {
    epsilon: f64,
    seed: u64,
    sabotage: bool,
    passed: bool,
    first_failure: Option<String>,
    checks: Vec<Check>,
}

/// Multiplies the slopes by `1 + 0.05 sin(2 pi (r - eps)/(1 - eps))` and
/// renormalizes, which keeps the boundary values but breaks stationarity.
fn sabotaged(f: &AmplitudeProfile) -> Result<AmplitudeProfile> {
    let eps = f.epsilon;
    let slopes = f
        .nodes
        .iter()
        .zip(&f.slopes)
        .map(|(&r, &s)| s * (1.0 + 0.05 * (std::f64::consts::TAU * (r - eps) / (1.0 - eps)).sin()))
        .collect();
    Ok(AmplitudeProfile::custom_normalized(eps, f.nodes.clone(), slopes)?)
}

// Per step: the ratio is at least REFINEMENT_FACTOR, or both values are roundoff.
fn refines(values: &[f64]) -> bool {
    values
        .windows(2)
        .all(|w| (w[0] <= RESIDUAL_FLOOR && w[1] <= RESIDUAL_FLOOR) || w[0] >= REFINEMENT_FACTOR * w[1])
}

fn suite_details(rep: &OptimalityReport) -> Value {
    json!({
        "baseline_energy": rep.baseline_energy,
        "slack": rep.slack,
        "resampled": rep.resampled,
        "violations": rep.violations,
        "min_convexity_gap": rep.convexity_gap_estimates.iter().cloned().fold(f64::INFINITY, f64::min),
        "perturbed_energies": rep.perturbed_energies.iter().map(|(_, e)| *e).collect::<Vec<_>>(),
    })
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let spec = AnnulusSpec::new(cfg.epsilon)?;
    let opts = PerturbOptions {
        n_r: cfg.grid.0,
        n_phi: cfg.grid.1,
        profile_nodes: cfg.nodes,
        profile_tol: cfg.tol,
        ..PerturbOptions::default()
    };
    let mut checks = Vec::new();
    for p in cfg.p_list.iter().filter_map(PNorm::as_finite) {
        let mut f = solve_optimal_profile(&spec, p, cfg.nodes, cfg.tol)?;
        if cfg.sabotage {
            f = sabotaged(&f)?;
        }

        let residual = el_residual(&f, p)?;
        checks.push(Check {
            name: "el_residual".into(),
            p,
            passed: residual <= EL_RESIDUAL_MAX,
            details: json!({ "residual": residual, "threshold": EL_RESIDUAL_MAX }),
        });

        let mut levels = Vec::new();
        for k in 0..3 {
            let grid = PolarGrid::new(cfg.epsilon, cfg.grid.0 << k, cfg.grid.1 << k)?;
            let psi = ScalarField2D::radial_lift(&grid, &f)?;
            levels.push(el_residual_2d(&psi, &ScalarField2D::angle(&grid), p)?);
        }
        let psi: Vec<f64> = levels.iter().map(|r| r.res_psi).collect();
        let theta: Vec<f64> = levels.iter().map(|r| r.res_theta).collect();
        let bc: Vec<f64> = levels.iter().map(|r| r.res_bc).collect();
        checks.push(Check {
            name: "el_residual_2d".into(),
            p,
            passed: refines(&psi) && refines(&theta) && refines(&bc),
            details: json!({
                "grids": (0..3).map(|k| format!("{}x{}", cfg.grid.0 << k, cfg.grid.1 << k)).collect::<Vec<_>>(),
                "res_psi": psi,
                "res_theta": theta,
                "res_bc": bc,
                "factor": REFINEMENT_FACTOR,
                "floor": RESIDUAL_FLOOR,
            }),
        });

        let rep = perturb_psi_test_with(&spec, p, cfg.perturbations, cfg.amplitude, cfg.seed, &opts)?;
        checks.push(Check {
            name: "perturb_psi".into(),
            p,
            passed: rep.passed(),
            details: suite_details(&rep),
        });

        for (name, choice) in [
            ("perturb_theta_optimal", ProfileChoice::Optimal(PNorm::Finite(p))),
            ("perturb_theta_affine", ProfileChoice::Affine),
        ] {
            let rep =
                perturb_theta_test_with(&spec, choice, p, cfg.perturbations, cfg.amplitude, cfg.seed, &opts)?;
            checks.push(Check { name: name.into(), p, passed: rep.passed(), details: suite_details(&rep) });
        }

        let mut cases = Vec::new();
        let mut all = true;
        for a in [1.0, 2.0] {
            for m in [1.0, 3.0] {
                let h = gp_hessian_bound_check(a, m, p, HESSIAN_SAMPLES, cfg.seed)?;
                all &= h.passed;
                cases.push(json!({ "a": a, "m": m, "passed": h.passed, "worst_ratio": h.worst_ratio, "failures": h.failures.len() }));
            }
        }
        checks.push(Check { name: "hessian_bound".into(), p, passed: all, details: Value::Array(cases) });
    }

    let first_failure = checks.iter().find(|c| !c.passed).map(|c| format!("{} (p = {})", c.name, c.p));
    let results = VerifyResults {
        epsilon: cfg.epsilon,
        seed: cfg.seed,
        sabotage: cfg.sabotage,
        passed: first_failure.is_none(),
        first_failure: first_failure.clone(),
        checks,
    };
    let path = write_json(cfg, "verify.json", results)?;
    Ok(Outcome { files: vec![path], failure: first_failure })
}
