use super::{profile_for, Outcome};
use crate::config::{Format, RunConfig};
use crate::error::Result;
use crate::output::{num, write_csv, write_json, write_text};
use crate::svg::{ramp, Panel, Stroke, Svg};
use cloak_core::annulus::radial_trace;
use cloak_core::conformal::{
    inner_hole_deviation, modified_energy, sample_rays, AnalyticMap, ComposedCloakMap, HoleDeviation, Ray,
};
use cloak_core::radial::{energy_p, QUAD_TOL};
use cloak_core::variational::PolarGrid;
use cloak_core::{AnnulusSpec, PNorm};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Points per ray polyline.
pub const RAY_POINTS: usize = 60;
/// Finite-difference step of the trace-identity check.
pub const TRACE_STEP: f64 = 1e-5;
/// Sample size of the trace-identity check, radii x angles.
pub const TRACE_SAMPLE: (usize, usize) = (32, 64);
pub const BOUNDARY_SAMPLES: usize = 256;

#[derive(Debug, Serialize)]
struct BoundaryDeviations {
    /// `max |Psi_eps(x) - x|` on the outer boundary.
    outer: f64,
    /// `max ||Psi(Psi_eps(x))| - 1/2|` on the inner boundary.
    inner: f64,
}

#[derive(Debug, Serialize)]
struct ConformalResults {
    map: String,
    epsilon: f64,
    profile: String,
    trace_identity_max_deviation: f64,
    boundary: BoundaryDeviations,
    modified_energy: Option<f64>,
    radial_energy: Option<f64>,
    hole: HoleDeviation,
    rays: Vec<Ray>,
}

fn c(x: [f64; 2]) -> Complex64 {
    Complex64::new(x[0], x[1])
}

fn v(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn trace_identity_deviation(m: &ComposedCloakMap) -> Result<f64> {
    let eps = m.epsilon();
    let (n_r, n_phi) = TRACE_SAMPLE;
    let mut worst: f64 = 0.0;
    for i in 0..n_r {
        let rho = eps + (1.0 - eps) * (i as f64 + 0.5) / n_r as f64;
        let expected = radial_trace(rho, m.profile.slope_at(rho)?)?;
        for j in 0..n_phi {
            let y = Complex64::from_polar(rho, TAU * (j as f64 + 0.5) / n_phi as f64);
            let t = m.pushforward_trace_at(v(m.analytic.from_disk(y)), TRACE_STEP)?;
            worst = worst.max((t - expected).abs());
        }
    }
    Ok(worst)
}

fn boundary_deviations(m: &ComposedCloakMap) -> Result<BoundaryDeviations> {
    let mut dev = BoundaryDeviations { outer: 0.0, inner: 0.0 };
    for j in 0..BOUNDARY_SAMPLES {
        let w = Complex64::from_polar(1.0, TAU * j as f64 / BOUNDARY_SAMPLES as f64);
        let x = m.analytic.from_disk(w);
        dev.outer = dev.outer.max((c(m.evaluate(v(x))?) - x).norm());
        let inner = m.evaluate(v(m.analytic.from_disk(w * m.epsilon())))?;
        dev.inner = dev.inner.max((m.analytic.to_disk(c(inner))?.norm() - 0.5).abs());
    }
    Ok(dev)
}

pub fn conformal(cfg: &RunConfig) -> Result<Outcome> {
    let spec = AnnulusSpec::new(cfg.epsilon)?;
    let analytic = AnalyticMap::builtin(&cfg.map)?;
    let p = cfg.p_list[0];
    let profile = profile_for(&spec, p, cfg.nodes, cfg.tol, true)?;
    let label = profile.kind.label();
    let m = ComposedCloakMap::new(analytic.clone(), profile);

    let (modified, radial) = match p {
        PNorm::Finite(q) => {
            let grid = PolarGrid::new(cfg.epsilon, cfg.grid.0, cfg.grid.1)?;
            (Some(modified_energy(&m, q, &grid)?), Some(energy_p(&m.profile, q, QUAD_TOL)?.value))
        }
        PNorm::Infinity => (None, None),
    };
    let results = ConformalResults {
        map: analytic.name(),
        epsilon: cfg.epsilon,
        profile: label,
        trace_identity_max_deviation: trace_identity_deviation(&m)?,
        boundary: boundary_deviations(&m)?,
        modified_energy: modified,
        radial_energy: radial,
        hole: inner_hole_deviation(&analytic, cfg.epsilon, BOUNDARY_SAMPLES)?,
        rays: sample_rays(&m, cfg.rays, RAY_POINTS)?,
    };

    let mut out = Outcome::default();
    if cfg.wants(Format::Csv) {
        let mut rows = Vec::new();
        for (k, ray) in results.rays.iter().enumerate() {
            for n in 0..ray.source.len() {
                let mut row = vec![k.to_string(), num(ray.angle), n.to_string()];
                for pt in [ray.reference[n], ray.reference_image[n], ray.source[n], ray.image[n]] {
                    row.push(num(pt[0]));
                    row.push(num(pt[1]));
                }
                rows.push(row);
            }
        }
        let header = [
            "ray",
            "angle",
            "index",
            "reference_x",
            "reference_y",
            "reference_image_x",
            "reference_image_y",
            "source_x",
            "source_y",
            "image_x",
            "image_y",
        ];
        out.files.push(write_csv(cfg, "conformal_rays.csv", &header, &rows)?);
    }
    if cfg.wants(Format::Svg) {
        out.files.push(write_text(cfg, "conformal.svg", &figure(&m, &results.rays))?);
    }
    if cfg.wants(Format::Json) {
        out.files.push(write_json(cfg, "conformal.json", &results)?);
    }
    Ok(out)
}

/// Four panels: the reference annulus before and after `Phi`, and the
/// domain before and after `Psi_eps`.
fn figure(m: &ComposedCloakMap, rays: &[Ray]) -> String {
    let eps = m.epsilon();
    let map = &m.analytic;
    let extent = (0..512)
        .map(|j| map.from_disk(Complex64::from_polar(1.0, TAU * j as f64 / 512.0)).norm())
        .fold(0.0, f64::max)
        * 1.08;
    let size = 300.0;
    let panels = [
        (Panel::square(40.0, 50.0, size, 1.08), "reference, before"),
        (Panel::square(380.0, 50.0, size, 1.08), "reference, after"),
        (Panel::square(40.0, 420.0, size, extent), "domain, before"),
        (Panel::square(380.0, 420.0, size, extent), "domain, after"),
    ];
    let mut svg = Svg::new(720.0, 760.0);
    let border = Stroke::solid("black", 1.5);
    let hole = Stroke { color: "black", width: 1.0, dash: Some("4,3") };
    let circle = |r: f64| move |t: f64| [r * t.cos(), r * t.sin()];
    let curve = |r: f64| move |t: f64| v(map.from_disk(Complex64::from_polar(r, t)));
    let colors = ramp(rays.len());

    for (k, (panel, title)) in panels.iter().enumerate() {
        svg.text(panel.left + size / 2.0, panel.top - 12.0, title, 14.0, "middle");
        let inner = if k % 2 == 0 { eps } else { 0.5 };
        if k < 2 {
            svg.closed_curve(panel, 256, circle(1.0), &border);
            svg.closed_curve(panel, 256, circle(inner), &hole);
        } else {
            svg.closed_curve(panel, 256, curve(1.0), &border);
            svg.closed_curve(panel, 256, curve(inner), &hole);
        }
        for (ray, color) in rays.iter().zip(&colors) {
            let pts = match k {
                0 => &ray.reference,
                1 => &ray.reference_image,
                2 => &ray.source,
                _ => &ray.image,
            };
            svg.polyline(panel, pts, &Stroke::solid(color, 1.2));
        }
    }
    svg.finish(
        "Cloaking by mapping",
        &format!(
            "map {}, epsilon = {eps}, {} rays, profile {}",
            map.name(),
            rays.len(),
            m.profile.kind.label()
        ),
    )
}
