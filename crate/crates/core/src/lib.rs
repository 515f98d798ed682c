//! Anisotropy-minimizing cloaking-by-mapping transformations on the annulus.
//!
//! A cloak built by mapping `eps <= |x| <= 1` onto `1/2 <= |x| <= 1` (identity
//! on the outer circle) uses the push-forward of the identity as its
//! material. This crate computes the radial log-amplitude profiles that
//! minimize the `I_p` anisotropy energies, certifies their optimality against
//! two-dimensional perturbations, and transfers them conformally to
//! non-circular cloaks.
//!
//! * [`annulus`]: tensors, trace and anisotropy formulas.
//! * [`radial`]: the radial energies, closed-form profiles and the shooting solver.
//! * [`variational`]: polar-grid fields, the `F_p` functional, Euler-Lagrange
//!   residuals and perturbation tests.
//! * [`conformal`]: analytic maps and the conjugated cloak `Psi^-1 o Phi o Psi`.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annulus;
pub mod conformal;
pub mod error;
pub mod par;
pub mod quadrature;
pub mod radial;
pub mod roots;
pub mod variational;

pub use annulus::{AnnulusSpec, GradientPair, PNorm, PushForwardTensor};
pub use error::{CloakError, Result};
pub use radial::{AmplitudeProfile, EnergyReport, ProfileKind};
