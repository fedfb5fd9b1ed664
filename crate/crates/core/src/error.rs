use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("field data has length {got}, grid expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("{name} = {value} violates {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("kappa = {0} violates the constraint κ ∈ (0,1)")]
    InvalidKappa(f64),

    #[error("operation is undefined for the zero field")]
    ZeroField,

    #[error("grid spacing {spacing} is too coarse for quadrature on [-1,1] (max 0.25)")]
    CoarseGrid { spacing: f64 },

    #[error("coefficient profile on axis {axis} is not admissible: {reason}")]
    InadmissibleProfile { axis: usize, reason: String },

    #[error("coefficient profile magnitude at the box edge is {ratio:e} of its maximum (limit 1e-12); enlarge the box")]
    ProfileNotLocalized { ratio: f64 },

    #[error("non-finite values produced at t = {t}")]
    Diverged { t: f64 },

    #[error("I(0)√c1 − √c2 must be positive (got {margin:e})")]
    RiccatiDomain { margin: f64 },

    #[error(
        "J(t) is singular at t = {t}: denominator {denominator:e} (blow-up at t* = {t_star:?})"
    )]
    RiccatiSingular {
        t: f64,
        denominator: f64,
        t_star: Option<f64>,
    },

    #[error("field is not a single Fourier mode")]
    NotSingleMode,

    #[error("sup norm {0} exceeds 30; exp(u0) would lose range")]
    ExpOverflow(f64),

    #[error("heat-propagated exponential lost positivity (min {0:e})")]
    LostPositivity(f64),

    #[error("need at least {needed} uniformly spaced snapshots, got {got}")]
    TooFewSnapshots { needed: usize, got: usize },

    #[error("snapshot sampling is not usable: {0}")]
    SamplingMismatch(String),

    #[error("coefficient flag does not match oracle kind: {0}")]
    OracleMismatch(String),

    #[error("snapshot format: {0}")]
    Format(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
