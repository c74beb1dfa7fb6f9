//! Error types shared across the simulator.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    /// Configuration or input validation failure (CLI exit code 2).
    #[error("config error: {0}")]
    Config(String),

    /// A mixture references a material that is not registered.
    #[error("unknown material {0:?}")]
    UnknownMaterial(String),

    /// A dose targets a resonance index that does not exist.
    #[error("material {material:?} has no resonance index {index}")]
    UnknownResonance { material: String, index: usize },

    /// Sample rate too low for the requested tones.
    #[error("sample rate {sample_rate_hz} Hz below 4x signal frequency {signal_hz} Hz")]
    Aliasing { sample_rate_hz: f64, signal_hz: f64 },

    /// Requested analyzer span falls outside the Nyquist range of the record.
    #[error("analyzer span {span_hz} Hz exceeds Nyquist frequency {nyquist_hz} Hz")]
    SpanOutsideNyquist { span_hz: f64, nyquist_hz: f64 },

    /// Spectral fit did not converge to an acceptable residual.
    #[error("fit diverged: residual {residual:.4e} above threshold {threshold:.4e}")]
    FitDiverged { residual: f64, threshold: f64 },

    /// Damage-model calibration points do not constrain the exponent.
    #[error("damage calibration underdetermined: {0}")]
    DegenerateCalibration(String),

    /// A trace file failed to parse.
    #[error("trace parse error at line {line}: {message}")]
    TraceParse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub fn config(msg: impl Into<String>) -> Self {
        SimError::Config(msg.into())
    }

    /// True for errors that should map to the CLI's config exit code.
    pub fn is_config(&self) -> bool {
        matches!(self, SimError::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
