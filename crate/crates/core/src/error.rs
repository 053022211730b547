use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate velocity at t = {t}: |gamma'(t)| = {speed:e}")]
    DegenerateVelocity { t: f64, speed: f64 },

    #[error("curvature vanishes on an interval (t in [{t_start:.6}, {t_end:.6}]); flat points are not isolated")]
    FlatPointsNotIsolated { t_start: f64, t_end: f64 },

    #[error("tangency condition violated: {0}")]
    TangencyViolation(String),

    #[error("odd number of boundary crossings ({count}) on line s = {s}, phi = {phi}")]
    OddIntersections { count: usize, s: f64, phi: f64 },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero covector has no image under the canonical relation")]
    ZeroCovector,

    #[error("sigma = 0 lies outside the range of the canonical relation")]
    ZeroSigma,

    #[error("input {x} outside tabulated range [{lo}, {hi}]")]
    TableRange { x: f64, lo: f64, hi: f64 },

    #[error("empty threshold set: {0}")]
    EmptyThreshold(String),

    #[error("aliasing guard tripped: boundary/peak symbol ratio {ratio:e} exceeds {limit:e}")]
    Aliasing { ratio: f64, limit: f64 },

    #[error("fit window too small: {0}")]
    WindowTooSmall(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
