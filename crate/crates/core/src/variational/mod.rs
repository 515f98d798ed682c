//! Two-dimensional variational checks on polar grids.

pub mod functional;
pub mod grid;
pub mod perturb;
pub mod residual;

pub use functional::{
    convexity_constant, fp_gateaux, functional_fp, gp_hessian_bound_check, pair_energy,
    strict_convexity_probe, HessianCheck,
};
pub use grid::{PolarGrid, ScalarField2D, VectorField2D};
pub use perturb::{
    perturb_psi_test, perturb_psi_test_with, perturb_theta_test, perturb_theta_test_with, OptimalityReport,
    PerturbOptions, PerturbationBasis,
};
pub use residual::{el_residual_2d, ElResiduals};
