use thiserror::Error;

/// Error type shared by all library modules.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("volume: {0}")]
    Volume(String),

    #[error("landmarks: {0}")]
    Landmarks(String),

    #[error("degenerate landmark configuration: {0}")]
    Degenerate(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("training diverged: {0}")]
    Divergence(String),

    #[error("synth: {0}")]
    Synth(String),

    #[error("pipeline stage `{stage}`: {message}")]
    Stage { stage: String, message: String },

    #[error("format: {0}")]
    Format(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CoreError {
    pub fn stage(stage: &str, message: impl Into<String>) -> Self {
        CoreError::Stage {
            stage: stage.to_string(),
            message: message.into(),
        }
    }
}
