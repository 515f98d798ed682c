mod conformal;
mod figure;
mod solve;
mod verify;

pub use conformal::conformal;
pub use figure::{figure_profiles, FIGURE_CURVES};
pub use solve::solve;
pub use verify::verify;

use crate::config::{CommandKind, RunConfig};
use crate::error::Result;
use cloak_core::radial::{build_profile, profile_p1, AmplitudeProfile, ProfileChoice};
use cloak_core::{AnnulusSpec, PNorm};
use std::path::PathBuf;

/// Files written by a command and the first failed check, if any.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub failure: Option<String>,
}

pub fn run(cmd: CommandKind, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        CommandKind::Solve => solve(cfg),
        CommandKind::FigureProfiles => figure_profiles(cfg),
        CommandKind::Verify => verify(cfg),
        CommandKind::Conformal => conformal(cfg),
    }
}

/// Optimal profile for `p`; `p = 1` uses the closed form when `closed_p1`.
pub(crate) fn profile_for(
    spec: &AnnulusSpec,
    p: PNorm,
    nodes: usize,
    tol: f64,
    closed_p1: bool,
) -> Result<AmplitudeProfile> {
    if closed_p1 && p == PNorm::Finite(1.0) {
        return Ok(profile_p1(spec, nodes)?);
    }
    Ok(build_profile(spec, ProfileChoice::Optimal(p), nodes, tol)?)
}

/// `2`, `1.5`, `inf`: used in file names.
pub(crate) fn p_tag(p: PNorm) -> String {
    p.to_string()
}
