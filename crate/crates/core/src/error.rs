use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("band limit {0} is below the minimum of 2")]
    InvalidBandLimit(usize),

    #[error("shape mismatch: expected {expected} entries, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("{what} has nonzero mean {value:e}")]
    NonzeroMean { what: &'static str, value: f64 },

    #[error("amplitude overflow: max(2u) = {max2u:e} exceeds the exp guard")]
    AmplitudeOverflow { max2u: f64 },

    #[error("time step {dt} is too large for the fastest resolved mode (dt * omega_max = {product})")]
    StepTooLarge { dt: f64, product: f64 },

    #[error("coupling matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("coupling matrix is singular")]
    SingularCoupling,

    #[error("{0} components exceed the subset enumeration limit of 20")]
    TooManyComponents(usize),

    #[error("Picard iteration failed to contract ({ratios:?}); shrink the horizon")]
    NoContraction { ratios: Vec<f64> },

    #[error("Picard iterate left the ball of radius {radius} (norm {norm})")]
    LeftBall { radius: f64, norm: f64 },

    #[error("CFL violation: dt = {dt} exceeds half the grid spacing {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("support radius {support} plus horizon {horizon} reaches the box half-width {half_width}")]
    SupportWraparound { support: f64, horizon: f64, half_width: f64 },

    #[error("series has {got} samples; at least {need} are required")]
    SeriesTooShort { got: usize, need: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),
}
