use thiserror::Error;

/// Errors raised by operator construction, dynamics and scattering routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mode dimension {dim}: truncated modes need at least 2 levels")]
    InvalidDimension { dim: usize },

    #[error("composite dimension overflows the addressable index range")]
    DimensionOverflow,

    #[error("operators live on different mode spaces: {left:?} vs {right:?}")]
    SpaceMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("mode slot {slot} out of range for a space with {num_modes} modes")]
    SlotOutOfRange { slot: usize, num_modes: usize },

    #[error("operator dimension {op_dim} does not match mode dimension {mode_dim} at slot {slot}")]
    EmbedDimensionMismatch {
        op_dim: usize,
        mode_dim: usize,
        slot: usize,
    },

    #[error("expected a space with {expected} modes, got {got}")]
    WrongModeCount { expected: usize, got: usize },

    #[error("{what} must be {constraint}, got {value}")]
    InvalidParameter {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error(
        "rotating-wave condition violated: omega_m = {omega_m}, 2J = {two_j}; \
         the effective three-mode picture requires omega_m = 2J exactly"
    )]
    RwaViolation { omega_m: f64, two_j: f64 },

    #[error(
        "asymmetric optomechanical couplings (g1 = {g1}, g2 = {g2}): the quasi-mode \
         transform does not decouple the pair unless g1 = g2"
    )]
    AsymmetricCoupling { g1: f64, g2: f64 },

    #[error("trace drift {drift:.3e} exceeded {limit:.3e} during integration at t = {t}")]
    IntegrationFailure { drift: f64, limit: f64, t: f64 },

    #[error("steady state is not unique (Liouvillian null space has dimension > 1): {detail}")]
    DegenerateSteadyState { detail: String },

    #[error("steady-state iteration did not converge: residual {residual:.3e} after t = {t}")]
    SteadyStateNonConvergence { residual: f64, t: f64 },

    #[error("correlation undefined: occupation {occupation:.3e} below threshold {threshold:.3e}")]
    UndefinedCorrelation { occupation: f64, threshold: f64 },

    #[error("quadrature failed to converge: error estimate {error:.3e} after {evaluations} evaluations")]
    QuadratureNonConvergence { error: f64, evaluations: usize },

    #[error(
        "continuum grid too coarse for packet width {epsilon:.3e}: spacing {dk:.3e} \
         needs at least {required} samples per half-width"
    )]
    GridTooCoarse { epsilon: f64, dk: f64, required: usize },

    #[error("discrete norm drifted by {drift:.3e} (limit {limit:.3e}) during propagation")]
    NormDrift { drift: f64, limit: f64 },

    #[error(
        "residual cavity population {population:.3e} above {limit:.3e} at t_final = {t_final}; \
         the packet has not cleared the scatterer"
    )]
    ResidualCavityPopulation {
        population: f64,
        limit: f64,
        t_final: f64,
    },

    #[error("linear solve failed: {0}")]
    SolverFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
