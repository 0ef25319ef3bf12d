use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degree {l} exceeds supported maximum {max}")]
    UnsupportedDegree { l: usize, max: usize },

    #[error("point at distance {distance} from the source center lies inside the exclusion radius {r_min}")]
    OutOfRegion { distance: f64, r_min: f64 },

    #[error("ray direction is (nearly) parallel to the wave vector: 1 - θ·k/κ = {gap:e}")]
    DegenerateDirection { gap: f64 },

    #[error("extraction kernel is degenerate: |D| = {d_abs:e} for τ = {tau}")]
    DegenerateTau { d_abs: f64, tau: f64 },

    #[error("evaluation radius {s} is inside the declared convergence bound {bound}")]
    OutOfZone { s: f64, bound: f64 },

    #[error("measurement failed: {0}")]
    Measurement(String),

    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),

    #[error("no admissible in-plane ray direction")]
    NoAdmissibleDirection,

    #[error("report encoding failed: {0}")]
    Report(String),

    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: Arc<std::io::Error>,
    },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source: Arc::new(source),
        }
    }
}
