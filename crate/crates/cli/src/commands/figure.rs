use super::{profile_for, Outcome};
use crate::config::{Format, RunConfig};
use crate::error::Result;
use crate::output::{num, write_csv, write_json, write_text};
use crate::svg::{ramp, Panel, Stroke, Svg};
use cloak_core::radial::{energy_inf, energy_p, profile_affine, AmplitudeProfile, QUAD_TOL};
use cloak_core::{AnnulusSpec, PNorm};
use serde::Serialize;

/// Curve labels in drawing order; `f_ra` first, then the optimal family.
pub const FIGURE_CURVES: [&str; 8] = ["f_ra", "f_1", "f_2", "f_3", "f_5", "f_8", "f_13", "f_inf"];

const FAMILY: [PNorm; 7] = [
    PNorm::Finite(1.0),
    PNorm::Finite(2.0),
    PNorm::Finite(3.0),
    PNorm::Finite(5.0),
    PNorm::Finite(8.0),
    PNorm::Finite(13.0),
    PNorm::Infinity,
];

#[derive(Debug, Serialize)]
struct CurveSummary {
    label: &'static str,
    p: Option<PNorm>,
    f_at_epsilon: f64,
    f_at_one: f64,
    f_at_tenth: f64,
    /// `I_p` at the curve's own `p` (`I_1` for `f_ra`, the sup for `f_inf`).
    energy: f64,
    energy_inf: f64,
}

#[derive(Debug, Serialize)]
struct FigureResults {
    epsilon: f64,
    nodes: usize,
    curves: Vec<CurveSummary>,
}

pub fn figure_profiles(cfg: &RunConfig) -> Result<Outcome> {
    let spec = AnnulusSpec::new(cfg.epsilon)?;
    let mut curves: Vec<(&'static str, Option<PNorm>, AmplitudeProfile)> =
        vec![("f_ra", None, profile_affine(&spec, cfg.nodes)?)];
    for (label, p) in FIGURE_CURVES[1..].iter().zip(FAMILY) {
        curves.push((label, Some(p), profile_for(&spec, p, cfg.nodes, cfg.tol, true)?));
    }

    let mut out = Outcome::default();
    if cfg.wants(Format::Csv) {
        let mut rows = Vec::with_capacity(8 * cfg.nodes);
        for (label, _, f) in &curves {
            for ((&r, &v), &s) in f.nodes.iter().zip(&f.values).zip(&f.slopes) {
                rows.push(vec![label.to_string(), num(r), num(v), num(s)]);
            }
        }
        out.files.push(write_csv(cfg, "figure_profiles.csv", &["curve", "r", "f", "fprime"], &rows)?);
    }
    if cfg.wants(Format::Json) {
        let mut summaries = Vec::new();
        for (label, p, f) in &curves {
            let sup = energy_inf(f)?.value;
            let energy = match p {
                Some(PNorm::Finite(q)) => energy_p(f, *q, QUAD_TOL)?.value,
                Some(PNorm::Infinity) => sup,
                None => energy_p(f, 1.0, QUAD_TOL)?.value,
            };
            summaries.push(CurveSummary {
                label,
                p: *p,
                f_at_epsilon: f.values[0],
                f_at_one: *f.values.last().unwrap(),
                f_at_tenth: if cfg.epsilon <= 0.1 { f.value_at(0.1)? } else { f64::NAN },
                energy,
                energy_inf: sup,
            });
        }
        let results = FigureResults { epsilon: cfg.epsilon, nodes: cfg.nodes, curves: summaries };
        out.files.push(write_json(cfg, "figure_profiles.json", results)?);
    }
    if cfg.wants(Format::Svg) {
        out.files.push(write_text(cfg, "figure_profiles.svg", &plot(&curves, cfg.epsilon))?);
    }
    Ok(out)
}

fn plot(curves: &[(&'static str, Option<PNorm>, AmplitudeProfile)], eps: f64) -> String {
    let mut svg = Svg::new(660.0, 460.0);
    let panel = Panel {
        left: 80.0,
        top: 30.0,
        width: 420.0,
        height: 360.0,
        x_range: (0.0, 1.0),
        y_range: (-0.75, 0.0),
    };
    svg.axes(&panel, &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0], &[-0.6, -0.4, -0.2, 0.0], "r", "f(r)");
    let colors = ramp(curves.len() - 1);
    let mut legend = Vec::new();
    for (n, (label, _, f)) in curves.iter().enumerate() {
        let stroke = if n == 0 {
            Stroke { color: "#ff8c00", width: 2.0, dash: Some("6,4") }
        } else {
            Stroke::solid(&colors[n - 1], 1.5)
        };
        let pts: Vec<[f64; 2]> = f.nodes.iter().zip(&f.values).map(|(&r, &v)| [r, v]).collect();
        svg.polyline(&panel, &pts, &stroke);
        legend.push((label.to_string(), stroke));
    }
    svg.legend(520.0, 50.0, &legend);
    svg.finish("Logarithmic amplitudes", &format!("f_ra (dashed) and the optimal family, epsilon = {eps}"))
}
