//! Feature extraction: framing, pitch, level, envelope, segmentation.

mod config;
mod envelope;
mod framing;
mod pitch;
mod segment;
mod spl;

pub use config::AnalysisConfig;
pub use envelope::extract_envelope;
pub(crate) use framing::samples_for;
pub use framing::{frame_signal, Frame};
pub use pitch::estimate_pitch_frame;
pub use segment::{mean_word_gap, measure_attack_decay, segment_words, WordSegment};
pub use spl::compute_frame_spl;

use crate::audio::AudioBuffer;
use crate::error::{Error, FrameStats};

/// The four vocal parameters of one utterance.
///
/// Every attribute is optional: a parameter that cannot be measured
/// (an unvoiced recording has no pitch, a single word has no gap) is
/// absent rather than zero or NaN.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureVector {
    /// Mean pitch over voiced in-word frames, Hz.
    pub pitch_hz: Option<f64>,
    /// Level pooled over in-word frames, dB full scale plus the
    /// configured offset.
    pub spl_db: Option<f64>,
    /// Mean per-word envelope rise time, seconds.
    pub ascend_s: Option<f64>,
    /// Mean per-word envelope fall time, seconds.
    pub descend_s: Option<f64>,
    /// Mean silence between consecutive words, seconds.
    pub gap_s: Option<f64>,
}

/// Extracts the four vocal parameters from a recording.
///
/// The buffer is framed, each frame gets a pitch estimate and an energy
/// measurement, and the RMS envelope is segmented into words. Pitch is
/// the arithmetic mean over voiced frames whose centers fall inside a
/// word; level pools the energy of all in-word frames before the dB
/// conversion, so a loud word is not averaged against a quiet one in
/// log domain; ascend, descend, and gap come from the word segments.
///
/// Absence rules: pitch requires at least one voiced in-word frame,
/// level at least one in-word frame, and gap at least two words.
/// If no words are detected at all the result is [`Error::NoSpeech`]
/// carrying whole-signal [`FrameStats`].
pub fn extract_features(
    buffer: &AudioBuffer,
    config: &AnalysisConfig,
) -> Result<FeatureVector, Error> {
    config.validate(buffer.sample_rate())?;
    let fs = buffer.sample_rate();
    let envelope = extract_envelope(buffer, config);
    let segments = segment_words(&envelope, fs, config);
    let frames = frame_signal(buffer, config);

    if segments.is_empty() {
        let mut voiced_frames = 0usize;
        let mut energy = 0.0f64;
        for frame in &frames {
            if estimate_pitch_frame(frame.samples, fs, config).is_some() {
                voiced_frames += 1;
            }
            energy += spl::mean_square(frame.samples);
        }
        let mean_square = if frames.is_empty() { 0.0 } else { energy / frames.len() as f64 };
        return Err(Error::NoSpeech(FrameStats {
            total_frames: frames.len(),
            voiced_frames,
            spl_db: spl::rms_db(libm::sqrt(mean_square), config.spl_offset_db),
            peak_env: envelope.iter().fold(0.0f64, |m, &e| m.max(e)),
        }));
    }

    let in_word = |frame: &Frame<'_>| {
        let center = frame.center_s(fs);
        segments.iter().any(|seg| center >= seg.start_s && center < seg.end_s)
    };

    let mut pitch_sum = 0.0f64;
    let mut voiced = 0usize;
    let mut energy = 0.0f64;
    let mut in_word_frames = 0usize;
    for frame in frames.iter().filter(|f| in_word(f)) {
        in_word_frames += 1;
        energy += spl::mean_square(frame.samples);
        if let Some(f0) = estimate_pitch_frame(frame.samples, fs, config) {
            pitch_sum += f0;
            voiced += 1;
        }
    }

    let word_count = segments.len() as f64;
    Ok(FeatureVector {
        pitch_hz: (voiced > 0).then(|| pitch_sum / voiced as f64),
        spl_db: (in_word_frames > 0).then(|| {
            spl::rms_db(libm::sqrt(energy / in_word_frames as f64), config.spl_offset_db)
        }),
        ascend_s: Some(segments.iter().map(|s| s.ascend_s).sum::<f64>() / word_count),
        descend_s: Some(segments.iter().map(|s| s.descend_s).sum::<f64>() / word_count),
        gap_s: mean_word_gap(&segments),
    })
}
