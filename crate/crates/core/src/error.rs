use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    /// The one-dimensional sum sits on (or too close to) a Rayleigh-Wood anomaly.
    #[error("Wood anomaly: distance {distance:e} below threshold {threshold:e}")]
    WoodAnomaly { distance: f64, threshold: f64 },

    /// The doubling sequence hit its cap before the stopping test was met.
    #[error("no convergence after c = {c}: best {best}, error estimate {err:e}")]
    NoConvergence { best: Complex64, err: f64, c: usize },

    #[error("resonant geometric series in mode {mode} (|1 - q| = {gap:e})")]
    Resonance2D { mode: i64, gap: f64 },

    #[error("two-dimensional Wood anomaly at order ({n}, {m}): |beta| = {beta_abs:e}")]
    WoodAnomaly2D { n: i64, m: i64, beta_abs: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
