use std::path::PathBuf;

/// Crate-wide error type.
///
/// Variants split into configuration errors (rejected inputs, exit code 1)
/// and numerical failures (the discretization could not support the
/// requested analysis, exit code 2).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    /// A wrapped phase difference on a plaquette edge landed on the branch
    /// point (±π), so the winding number is ambiguous at this resolution.
    #[error("undersampled plaquette at pixel ({ix}, {iy}): wrapped phase step within 1e-12 of π")]
    UndersampledPlaquette { ix: usize, iy: usize },

    #[error("winding path crosses low-amplitude pixel ({ix}, {iy}); phase unreliable")]
    LowAmplitudePath { ix: usize, iy: usize },

    #[error("inconsistent vortex signs along the cut: {0}")]
    InconsistentSigns(String),

    #[error("detections contradict the regime implied by mu = {mu}: {message}")]
    RegimeContradiction { mu: f64, message: String },

    #[error("tracking loss after sweep step {step}: {message}")]
    TrackingLoss { step: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(field: &str, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the CLI: 1 for configuration and I/O errors,
    /// 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig { .. } | Error::Io { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
