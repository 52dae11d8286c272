//! Fixed-length analysis framing.

use alloc::vec::Vec;

use crate::audio::AudioBuffer;

use super::config::AnalysisConfig;

/// One analysis frame: a contiguous sample window plus its offset.
#[derive(Debug, Clone, Copy)]
pub struct Frame<'a> {
    /// Window samples.
    pub samples: &'a [f64],
    /// Index of the first sample within the source buffer.
    pub start: usize,
}

impl Frame<'_> {
    /// Start time of the window in seconds.
    pub fn start_s(&self, sample_rate: u32) -> f64 {
        self.start as f64 / sample_rate as f64
    }

    /// Center time of the window in seconds.
    pub fn center_s(&self, sample_rate: u32) -> f64 {
        (self.start as f64 + self.samples.len() as f64 / 2.0) / sample_rate as f64
    }
}

/// Rounds a duration in seconds to a whole sample count.
pub(crate) fn samples_for(duration_s: f64, sample_rate: u32) -> usize {
    libm::round(duration_s * sample_rate as f64) as usize
}

/// Splits a buffer into analysis frames.
///
/// Frames are `round(frame_len_s * fs)` samples long and start every
/// `round(hop_s * fs)` samples; a trailing window shorter than the
/// frame length is discarded, so a buffer shorter than one frame yields
/// no frames at all.
pub fn frame_signal<'a>(buffer: &'a AudioBuffer, config: &AnalysisConfig) -> Vec<Frame<'a>> {
    let fs = buffer.sample_rate();
    let frame_len = samples_for(config.frame_len_s, fs);
    let hop = samples_for(config.hop_s, fs).max(1);
    if frame_len == 0 {
        return Vec::new();
    }
    let samples = buffer.samples();
    let mut frames = Vec::new();
    let mut start = 0usize;
    while start + frame_len <= samples.len() {
        frames.push(Frame { samples: &samples[start..start + frame_len], start });
        start += hop;
    }
    frames
}
