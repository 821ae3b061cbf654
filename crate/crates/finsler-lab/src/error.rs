use thiserror::Error;

/// Errors surfaced by the geometry engine.
///
/// Domain errors name the violated constraint so that callers (and the CLI
/// exit-code mapping) can distinguish "you asked outside the chart" from
/// genuine numerical failure.
#[derive(Debug, Clone, Error)]
pub enum FinslerError {
    #[error("domain violation for `{metric}`: {constraint}")]
    Domain { metric: String, constraint: String },

    #[error("slit-bundle violation: y = 0 is outside TM_0")]
    ZeroTangent,

    #[error(
        "fundamental tensor not positive definite for `{metric}` at x={x:?}, y={y:?} \
         (min eigenvalue {min_eig:.3e})"
    )]
    NotConvex {
        metric: String,
        x: Vec<f64>,
        y: Vec<f64>,
        min_eig: f64,
    },

    #[error("degenerate flag: transverse edge nearly parallel to flagpole (denominator {denom:.3e})")]
    DegenerateFlag { denom: f64 },

    #[error("geodesic path too short: {len} samples, need at least {min}")]
    PathTooShort { len: usize, min: usize },

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, FinslerError>;
