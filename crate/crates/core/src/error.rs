use thiserror::Error;

/// Errors raised by the cloak computations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CloakError {
    #[error("singular matrix: |det| = {det:e} is below 1e-14")]
    SingularMatrix { det: f64 },

    #[error("orientation error: det(Dpsi, Dtheta) = {det:e} must be positive")]
    Orientation { det: f64 },

    #[error("degenerate angle: |sin(angle)| = {sin:e} is below 1e-14")]
    DegenerateAngle { sin: f64 },

    #[error("non-positive slope f' = {slope:e} at r = {r}")]
    NonPositiveSlope { r: f64, slope: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: G(t) = {s} is not attained for p = {p}")]
    Range { s: f64, p: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shooting failed to converge after {iterations} iterations, last bracket [{lo:e}, {hi:e}]")]
    NonConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("inadmissible profile: {0}")]
    InadmissibleProfile(String),

    #[error("constraint Du.V > 0 violated at {} node(s), first at (i_r, i_phi) = {:?}", .nodes.len(), .nodes.first())]
    Constraint { nodes: Vec<(usize, usize)> },

    #[error("retry budget exhausted after {attempts} attempts keeping perturbation {index} admissible")]
    RetryBudget { index: usize, attempts: usize },

    #[error("point with |Psi(x)| = {modulus} lies outside the annulus [{inner}, 1]")]
    OutOfAnnulus { modulus: f64, inner: f64 },

    #[error("branch error: {0}")]
    Branch(String),
}

pub type Result<T> = std::result::Result<T, CloakError>;
