//! Error types shared across the simulation modules.

use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    /// A function was evaluated outside its supported parameter domain.
    #[error("domain error in {context}: {message}")]
    Domain { context: &'static str, message: String },

    /// A stationary Bogoliubov mode is (numerically) gapless.
    #[error("degenerate mode at k = {k}: omega = {omega:.3e} < 1e-14")]
    DegenerateMode { k: f64, omega: f64 },

    /// Time evolution lost unitarity beyond the allowed drift.
    #[error("norm drift {drift:.3e} exceeds tolerance {tol:.3e} at t = {t}")]
    NormDrift { t: f64, drift: f64, tol: f64 },

    /// A nonlinear fit did not converge within the restart budget.
    #[error("fit failed to converge: {0}")]
    FitDidNotConverge(String),

    /// A linear fit basis is numerically rank-deficient on the given window.
    #[error("rank-deficient fit window: condition number {cond:.3e} > {limit:.3e}")]
    RankDeficient { cond: f64, limit: f64 },

    /// A profile never exceeds the requested threshold.
    #[error("profile never exceeds cutoff {cutoff}")]
    NoCrossing { cutoff: f64 },

    /// Invariant violation detected while constructing a domain object.
    #[error("invalid {context}: {message}")]
    Invalid { context: &'static str, message: String },

    /// I/O error while persisting results.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Serialization error while persisting results.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { context, message: message.into() }
    }

    pub fn invalid(context: &'static str, message: impl Into<String>) -> Self {
        Error::Invalid { context, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
