use crate::commands::{self, Outcome};
use crate::config::{parse_formats, parse_grid, parse_p_list, CommandKind, Layer, RunConfig};
use crate::error::{CliError, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "cloak", version, about = "Optimal radial cloaks: solves, checks and figures")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Inner radius of the annulus, in (0, 1/2].
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Energy exponent; repeatable, `inf` for the sup-norm energy.
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Vec<String>,
    /// Profile nodes.
    #[arg(long, global = true)]
    pub nodes: Option<usize>,
    /// Polar grid as NRxNP, e.g. 64x128.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Solver tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for the random perturbations
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Vec<String>,
    /// Flat key = value config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the optimal profile at each p.
    Solve,
    /// The profile figure: f_ra and the optimal family.
    FigureProfiles,
    /// Run the optimality checks; exits 4 if any fails.
    Verify {
        /// Perturb the solved profile so the stationarity checks fail.
        #[arg(long)]
        sabotage: bool,
        /// Random perturbations per suite
        #[arg(long)]
        perturbations: Option<usize>,
        /// Sup-norm size of each perturbation
        #[arg(long)]
        amplitude: Option<f64>,
    },
    /// Conformal transfer to a simply connected domain and the ray figure.
    Conformal {
        /// Built-in map: identity, sinh, perturbed_power or sinh_power.
        #[arg(long)]
        map: Option<String>,
        /// Number of radial rays drawn
        #[arg(long)]
        rays: Option<usize>,
    },
}

impl Cli {
    pub fn kind(&self) -> CommandKind {
        match self.command {
            Command::Solve => CommandKind::Solve,
            Command::FigureProfiles => CommandKind::FigureProfiles,
            Command::Verify { .. } => CommandKind::Verify,
            Command::Conformal { .. } => CommandKind::Conformal,
        }
    }

    fn flags(&self) -> Result<Layer> {
        let g = &self.global;
        let mut layer = Layer {
            epsilon: g.epsilon,
            p: if g.p.is_empty() { None } else { Some(parse_p_list(g.p.iter().map(String::as_str))?) },
            nodes: g.nodes,
            grid: g.grid.as_deref().map(parse_grid).transpose()?,
            tol: g.tol,
            seed: g.seed,
            out: g.out.clone(),
            format: if g.format.is_empty() {
                None
            } else {
                Some(parse_formats(g.format.iter().map(String::as_str))?)
            },
            ..Layer::default()
        };
        match &self.command {
            Command::Verify { sabotage, perturbations, amplitude } => {
                layer.sabotage = sabotage.then_some(true);
                layer.perturbations = *perturbations;
                layer.amplitude = *amplitude;
            }
            Command::Conformal { map, rays } => {
                layer.map = map.clone();
                layer.rays = *rays;
            }
            Command::Solve | Command::FigureProfiles => {}
        }
        Ok(layer)
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let file = self.global.config.as_deref().map(Layer::read_file).transpose()?;
        RunConfig::resolve(self.kind(), file, self.flags()?)
    }
}

/// Parses, runs and turns a failed check into [`CliError::Verification`].
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.resolve()?;
    let outcome = commands::run(cli.kind(), &cfg)?;
    if let Some(name) = &outcome.failure {
        return Err(CliError::Verification(format!("first failing check: {name}")));
    }
    Ok(outcome)
}
