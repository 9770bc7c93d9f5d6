use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integration failed at r = {r}: {reason}")]
    Integration { r: f64, reason: String },

    #[error("no eigenvalue bracket found for {what} after sweeping up to lambda = {last_lambda}")]
    BracketNotFound { what: String, last_lambda: f64 },

    #[error("target lambda {target} is not above the spectral floor {floor}")]
    TargetBelowSpectrum { target: f64, floor: f64 },

    #[error("no sign change of {what} on [{lo}, {hi}]")]
    NoSignChange { what: String, lo: f64, hi: f64 },

    #[error("unknown expression id `{0}`")]
    UnknownExpression(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("normalization failed: {0}")]
    Normalization(String),

    #[error("rearranged domain radius {r_star} is smaller than ball radius {r_ball}")]
    FaberKrahnViolation { r_star: f64, r_ball: f64 },

    #[error("lambda_1 mismatch: domain {domain}, ball {ball}")]
    LambdaMismatch { domain: f64, ball: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
