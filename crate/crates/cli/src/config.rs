//! Run configuration: command-line flags over config-file keys over defaults.
//!
//! The config file is flat `key = value` text. Blank lines and lines
//! starting with `#` are ignored. Keys match the long flag names; `p` and
//! `format` take comma-separated lists.

use crate::error::{CliError, Result};
use cloak_core::conformal::AnalyticMap;
use cloak_core::PNorm;
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => {
                Err(CliError::Validation(format!("unknown format '{other}', expected csv, json or svg")))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Solve,
    FigureProfiles,
    Verify,
    Conformal,
}

/// Raw, possibly partial settings from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer {
    pub epsilon: Option<f64>,
    pub p: Option<Vec<PNorm>>,
    pub nodes: Option<usize>,
    pub grid: Option<(usize, usize)>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Vec<Format>>,
    pub map: Option<String>,
    pub rays: Option<usize>,
    pub sabotage: Option<bool>,
    pub perturbations: Option<usize>,
    pub amplitude: Option<f64>,
}

impl Layer {
    /// Fields set in `top` win.
    pub fn over(self, top: Layer) -> Layer {
        Layer {
            epsilon: top.epsilon.or(self.epsilon),
            p: top.p.or(self.p),
            nodes: top.nodes.or(self.nodes),
            grid: top.grid.or(self.grid),
            tol: top.tol.or(self.tol),
            seed: top.seed.or(self.seed),
            out: top.out.or(self.out),
            format: top.format.or(self.format),
            map: top.map.or(self.map),
            rays: top.rays.or(self.rays),
            sabotage: top.sabotage.or(self.sabotage),
            perturbations: top.perturbations.or(self.perturbations),
            amplitude: top.amplitude.or(self.amplitude),
        }
    }

    pub fn defaults(cmd: CommandKind) -> Layer {
        let (epsilon, p) = match cmd {
            CommandKind::Solve => (0.1, PNorm::Finite(2.0)),
            CommandKind::FigureProfiles => (0.01, PNorm::Finite(2.0)),
            CommandKind::Verify => (0.1, PNorm::Finite(2.0)),
            CommandKind::Conformal => (0.1, PNorm::Finite(1.0)),
        };
        Layer {
            epsilon: Some(epsilon),
            p: Some(vec![p]),
            nodes: Some(400),
            grid: Some((64, 128)),
            tol: Some(1e-10),
            seed: Some(42),
            out: Some(PathBuf::from("out")),
            format: Some(vec![Format::Csv, Format::Json, Format::Svg]),
            map: Some("sinh".into()),
            rays: Some(19),
            sabotage: Some(false),
            perturbations: Some(50),
            amplitude: Some(0.05),
        }
    }

    /// Parses the flat `key = value` format.
    pub fn parse_file(text: &str) -> Result<Layer> {
        let mut layer = Layer::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("config line {}: expected key = value", n + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad =
                |what: &str| CliError::Validation(format!("config line {}: invalid {what} '{value}'", n + 1));
            match key {
                "epsilon" => layer.epsilon = Some(value.parse().map_err(|_| bad("epsilon"))?),
                "p" => layer.p = Some(parse_p_list(value.split(','))?),
                "nodes" => layer.nodes = Some(value.parse().map_err(|_| bad("nodes"))?),
                "grid" => layer.grid = Some(parse_grid(value)?),
                "tol" => layer.tol = Some(value.parse().map_err(|_| bad("tol"))?),
                "seed" => layer.seed = Some(value.parse().map_err(|_| bad("seed"))?),
                "out" => layer.out = Some(PathBuf::from(value)),
                "format" => layer.format = Some(parse_formats(value.split(','))?),
                "map" => layer.map = Some(value.to_string()),
                "rays" => layer.rays = Some(value.parse().map_err(|_| bad("rays"))?),
                "sabotage" => layer.sabotage = Some(value.parse().map_err(|_| bad("sabotage"))?),
                "perturbations" => {
                    layer.perturbations = Some(value.parse().map_err(|_| bad("perturbations"))?)
                }
                "amplitude" => layer.amplitude = Some(value.parse().map_err(|_| bad("amplitude"))?),
                other => {
                    return Err(CliError::Validation(format!("config line {}: unknown key '{other}'", n + 1)))
                }
            }
        }
        Ok(layer)
    }

    pub fn read_file(path: &Path) -> Result<Layer> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse_file(&text)
    }
}

pub fn parse_p_list<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Vec<PNorm>> {
    items
        .into_iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<PNorm>().map_err(|e| CliError::Validation(e.to_string())))
        .collect()
}

pub fn parse_formats<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Vec<Format>> {
    let mut out: Vec<Format> = Vec::new();
    for s in items.into_iter().filter(|s| !s.trim().is_empty()) {
        let f = s.parse()?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

/// `NRxNP`, e.g. `64x128`.
pub fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Validation(format!("grid must look like 64x128, got '{s}'"));
    let (a, b) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Fully resolved and validated settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub epsilon: f64,
    pub p_list: Vec<PNorm>,
    pub nodes: usize,
    pub grid: (usize, usize),
    pub tol: f64,
    pub seed: u64,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub map: String,
    pub rays: usize,
    pub sabotage: bool,
    pub perturbations: usize,
    pub amplitude: f64,
}

impl RunConfig {
    pub fn resolve(cmd: CommandKind, file: Option<Layer>, flags: Layer) -> Result<RunConfig> {
        let mut merged = Layer::defaults(cmd);
        if let Some(file) = file {
            merged = merged.over(file);
        }
        let l = merged.over(flags);
        let cfg = RunConfig {
            command: match cmd {
                CommandKind::Solve => "solve",
                CommandKind::FigureProfiles => "figure-profiles",
                CommandKind::Verify => "verify",
                CommandKind::Conformal => "conformal",
            }
            .into(),
            epsilon: l.epsilon.unwrap(),
            p_list: l.p.unwrap(),
            nodes: l.nodes.unwrap(),
            grid: l.grid.unwrap(),
            tol: l.tol.unwrap(),
            seed: l.seed.unwrap(),
            out: l.out.unwrap(),
            formats: l.format.unwrap(),
            map: l.map.unwrap(),
            rays: l.rays.unwrap(),
            sabotage: l.sabotage.unwrap(),
            perturbations: l.perturbations.unwrap(),
            amplitude: l.amplitude.unwrap(),
        };
        cfg.validate(cmd)?;
        Ok(cfg)
    }

    fn validate(&self, cmd: CommandKind) -> Result<()> {
        let fail = |msg: String| Err(CliError::Validation(msg));
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return fail(format!("epsilon must lie in (0, 1/2], got {}", self.epsilon));
        }
        if self.p_list.is_empty() {
            return fail("at least one p is required".into());
        }
        if self.nodes < 16 {
            return fail(format!("nodes must be at least 16, got {}", self.nodes));
        }
        if self.grid.0 < 8 || self.grid.1 < 16 {
            return fail(format!("grid must be at least 8x16, got {}x{}", self.grid.0, self.grid.1));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return fail(format!("tol must lie in (0, 1), got {}", self.tol));
        }
        if self.formats.is_empty() {
            return fail("at least one output format is required".into());
        }
        match cmd {
            CommandKind::Verify => {
                if self.p_list.iter().any(PNorm::is_infinite) {
                    return fail("verify needs finite p".into());
                }
                if self.perturbations == 0 {
                    return fail("perturbations must be positive".into());
                }
                if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
                    return fail(format!(
                        "amplitude must be finite and non-negative, got {}",
                        self.amplitude
                    ));
                }
            }
            CommandKind::Conformal => {
                AnalyticMap::builtin(&self.map).map_err(|e| CliError::Validation(e.to_string()))?;
                if self.rays == 0 {
                    return fail("rays must be positive".into());
                }
                if self.p_list.len() != 1 {
                    return fail("conformal takes a single p".into());
                }
            }
            CommandKind::Solve | CommandKind::FigureProfiles => {}
        }
        Ok(())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}
