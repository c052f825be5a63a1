use thiserror::Error;

use crate::profile::ProfileKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inadmissible shape parameters (c3={c3}, c5={c5}): {reason}")]
    InadmissibleShape { c3: f64, c5: f64, reason: String },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operation needs a {expected} profile, got {found}")]
    WrongKind {
        expected: ProfileKind,
        found: ProfileKind,
    },

    #[error("profile is not flowable (status {0})")]
    NotFlowable(String),

    #[error("series division by a series with constant term {0}")]
    SeriesDivision(f64),

    #[error("metric pinched at t={t}: {detail}")]
    Pinched { t: f64, detail: String },

    #[error("numerical instability at t={t}: {detail}")]
    Unstable { t: f64, detail: String },

    #[error("power-law fit: {0}")]
    Fit(String),

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
