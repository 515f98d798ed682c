use super::{p_tag, profile_for, Outcome};
use crate::config::{Format, RunConfig};
use crate::error::Result;
use crate::output::{num, write_csv, write_json, write_text};
use crate::svg::{ramp, Panel, Stroke, Svg};
use cloak_core::annulus::radial_trace;
use cloak_core::radial::{el_residual, energy_inf, energy_p, AmplitudeProfile, QUAD_TOL};
use cloak_core::{AnnulusSpec, PNorm};
use serde::Serialize;

#[derive(Debug, Serialize)]
struct SolveEntry {
    p: PNorm,
    label: String,
    nodes: usize,
    shooting_constant: Option<f64>,
    energy: f64,
    quadrature_error_estimate: f64,
    energy_inf: f64,
    el_residual: Option<f64>,
    f_at_epsilon: f64,
    f_at_one: f64,
}

#[derive(Debug, Serialize)]
struct SolveResults {
    epsilon: f64,
    profiles: Vec<SolveEntry>,
}

pub(crate) fn profile_rows(f: &AmplitudeProfile) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::with_capacity(f.nodes.len());
    for ((&r, &v), &s) in f.nodes.iter().zip(&f.values).zip(&f.slopes) {
        rows.push(vec![num(r), num(v), num(s), num(radial_trace(r, s)?)]);
    }
    Ok(rows)
}

pub fn solve(cfg: &RunConfig) -> Result<Outcome> {
    let spec = AnnulusSpec::new(cfg.epsilon)?;
    let mut out = Outcome::default();
    let mut entries = Vec::new();
    let mut profiles = Vec::new();
    for &p in &cfg.p_list {
        let f = profile_for(&spec, p, cfg.nodes, cfg.tol, false)?;
        let sup = energy_inf(&f)?;
        let (energy, err, residual) = match p {
            PNorm::Finite(q) => {
                let e = energy_p(&f, q, QUAD_TOL)?;
                (e.value, e.quadrature_error_estimate, Some(el_residual(&f, q)?))
            }
            PNorm::Infinity => (sup.value, 0.0, None),
        };
        entries.push(SolveEntry {
            p,
            label: f.kind.label(),
            nodes: f.nodes.len(),
            shooting_constant: f.shooting_constant,
            energy,
            quadrature_error_estimate: err,
            energy_inf: sup.value,
            el_residual: residual,
            f_at_epsilon: f.values[0],
            f_at_one: *f.values.last().unwrap(),
        });
        if cfg.wants(Format::Csv) {
            let name = format!("profile_p{}.csv", p_tag(p));
            out.files.push(write_csv(cfg, &name, &["r", "f", "fprime", "trace"], &profile_rows(&f)?)?);
        }
        profiles.push(f);
    }
    if cfg.wants(Format::Json) {
        out.files.push(write_json(
            cfg,
            "solve.json",
            SolveResults { epsilon: cfg.epsilon, profiles: entries },
        )?);
    }
    if cfg.wants(Format::Svg) {
        out.files.push(write_text(cfg, "profiles.svg", &profile_plot(&profiles, cfg.epsilon))?);
    }
    Ok(out)
}

fn profile_plot(profiles: &[AmplitudeProfile], eps: f64) -> String {
    let mut svg = Svg::new(640.0, 440.0);
    let panel = Panel {
        left: 80.0,
        top: 30.0,
        width: 400.0,
        height: 340.0,
        x_range: (0.0, 1.0),
        y_range: (-0.75, 0.0),
    };
    svg.axes(&panel, &[0.0, 0.25, 0.5, 0.75, 1.0], &[-0.6, -0.4, -0.2, 0.0], "r", "f(r)");
    let colors = ramp(profiles.len());
    let mut legend = Vec::new();
    for (f, color) in profiles.iter().zip(&colors) {
        let pts: Vec<[f64; 2]> = f.nodes.iter().zip(&f.values).map(|(&r, &v)| [r, v]).collect();
        let stroke = Stroke::solid(color, 1.5);
        svg.polyline(&panel, &pts, &stroke);
        legend.push((f.kind.label(), stroke));
    }
    svg.legend(500.0, 50.0, &legend);
    svg.finish("Optimal log-amplitude profiles", &format!("epsilon = {eps}"))
}
