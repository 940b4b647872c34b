use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, the harness and the configuration layer.
#[derive(Debug, Error)]
pub enum FrontError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("length mismatch: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("trajectories are not aligned: {0}")]
    TrajectoryMismatch(String),

    #[error("scheme denominator is {value:e} at k = {k}; it must be positive for every mode")]
    NonPositiveDenominator { k: usize, value: f64 },

    #[error("non-finite value in state after step {step} (t = {t})")]
    NonFinite { step: usize, t: f64 },

    #[error("blow-up: sup norm {sup_norm:e} exceeds guard {bound:e} at t = {t}")]
    BlowUp { t: f64, sup_norm: f64, bound: f64 },

    #[error("unknown figure id {0}; expected 1..=13")]
    UnknownFigure(u32),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("trajectory has no snapshots")]
    EmptyTrajectory,

    #[error("malformed CSV in {path}: {reason}")]
    Csv { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FrontError {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        FrontError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics (as opposed to usage or I/O errors).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            FrontError::NonPositiveDenominator { .. } | FrontError::NonFinite { .. } | FrontError::BlowUp { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, FrontError>;
