//! Error and diagnostic types shared across the crate.

use thiserror::Error;

/// Whole-signal frame statistics attached to [`Error::NoSpeech`] so a
/// caller can still inspect a recording in which no words were found.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameStats {
    /// Number of analysis frames in the signal.
    pub total_frames: usize,
    /// Frames that passed the voicing test.
    pub voiced_frames: usize,
    /// Level pooled over every frame, dB full scale plus the configured offset.
    pub spl_db: f64,
    /// Maximum of the amplitude envelope.
    pub peak_env: f64,
}

/// Errors produced by the analysis, calibration, and synthesis APIs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An [`AnalysisConfig`](crate::AnalysisConfig) field violates its
    /// documented range.
    #[error("invalid analysis config: {0}")]
    InvalidConfig(&'static str),
    /// A [`ThresholdConfig`](crate::ThresholdConfig) field violates its
    /// documented range.
    #[error("invalid threshold config: {0}")]
    InvalidThresholds(&'static str),
    /// An audio buffer violates the amplitude or sample-rate invariants.
    #[error("invalid audio buffer: {0}")]
    InvalidBuffer(&'static str),
    /// An [`UtteranceSpec`](crate::UtteranceSpec) violates its invariants.
    #[error("invalid utterance spec: {0}")]
    InvalidSpec(&'static str),
    /// [`calibrate`](crate::calibrate) was called with no feature vectors.
    #[error("calibration requires at least one feature vector")]
    EmptyCalibration,
    /// A percent deviation was requested against a zero baseline mean.
    #[error("degenerate baseline: mean {attribute} is zero")]
    DegenerateBaseline {
        /// Name of the offending baseline attribute.
        attribute: &'static str,
    },
    /// No word segments were detected in the signal.
    #[error(
        "no speech segments detected ({frames} frames, {voiced} voiced, \
         peak envelope {peak:.3e})",
        frames = .0.total_frames,
        voiced = .0.voiced_frames,
        peak = .0.peak_env
    )]
    NoSpeech(FrameStats),
}
