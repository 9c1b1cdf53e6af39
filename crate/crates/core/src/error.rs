use thiserror::Error;

/// Errors raised by field evaluation, solvers and the run front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("invalid source description: {0}")]
    InvalidSource(String),

    /// Source speed is not below the wave speed it is paired with.
    #[error("supersonic trajectory: vmax = {vmax} is not below c = {speed}")]
    Supersonic { vmax: f64, speed: f64 },

    /// The retarded-time condition has no root on the available history,
    /// i.e. the source has not yet influenced the observation event.
    #[error("no retarded time: the source does not reach (x, t = {t})")]
    NoRetardation { t: f64 },

    /// The observer sits on (or within `r_min` of) the source worldline.
    #[error("singular point: distance {distance} to the source is below r_min = {r_min}")]
    SingularPoint { distance: f64, r_min: f64 },

    #[error("time {t} outside the tabulated range [{start}, {end}]")]
    Extrapolation { t: f64, start: f64, end: f64 },

    #[error("quadrature did not converge: estimated relative error {achieved:e} > {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("root solver did not converge after {iterations} iterations")]
    RootSolver { iterations: usize },

    #[error("two-dimensional sources require a finite switch-on time")]
    UnboundedHistory,

    #[error("wavefront too close: distance {distance:e} leaves no admissible step")]
    WavefrontTooClose { distance: f64 },

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
