//! Analysis configuration.

use crate::error::Error;

/// Tunable parameters of the feature-extraction pipeline.
///
/// Defaults give 100 ms non-overlapping frames (a statistic rate of ten
/// values per second), a pitch search range wide enough for shrill
/// voices, a 10 ms RMS envelope window, and word segmentation at one
/// tenth of the peak envelope. `spl_offset_db` shifts reported levels
/// to account for a known recording-chain gain (for example -60.0 for a
/// chain attenuated by 60 dB).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct AnalysisConfig {
    /// Analysis frame length in seconds.
    pub frame_len_s: f64,
    /// Hop between frame starts in seconds.
    pub hop_s: f64,
    /// Lower bound of the pitch search range in Hz.
    pub pitch_min_hz: f64,
    /// Upper bound of the pitch search range in Hz.
    pub pitch_max_hz: f64,
    /// Minimum normalized autocorrelation peak for a voiced frame.
    pub voicing_threshold: f64,
    /// RMS envelope window length in seconds.
    pub envelope_window_s: f64,
    /// Word detection threshold as a fraction of the peak envelope.
    pub segment_rel_threshold: f64,
    /// Shortest envelope run kept as a word, in seconds.
    pub min_word_s: f64,
    /// Shortest silence treated as a word boundary, in seconds.
    pub min_gap_s: f64,
    /// Calibration offset added to every reported level, in dB.
    pub spl_offset_db: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            frame_len_s: 0.100,
            hop_s: 0.100,
            pitch_min_hz: 50.0,
            pitch_max_hz: 2000.0,
            voicing_threshold: 0.30,
            envelope_window_s: 0.010,
            segment_rel_threshold: 0.10,
            min_word_s: 0.050,
            min_gap_s: 0.030,
            spl_offset_db: 0.0,
        }
    }
}

impl AnalysisConfig {
    /// Checks the config invariants against a concrete sample rate.
    pub fn validate(&self, sample_rate: u32) -> Result<(), Error> {
        if !(self.hop_s > 0.0 && self.hop_s <= self.frame_len_s) {
            return Err(Error::InvalidConfig("hop_s must satisfy 0 < hop_s <= frame_len_s"));
        }
        if !(self.pitch_min_hz > 0.0 && self.pitch_min_hz < self.pitch_max_hz) {
            return Err(Error::InvalidConfig("pitch range must satisfy 0 < pitch_min_hz < pitch_max_hz"));
        }
        if self.pitch_max_hz >= sample_rate as f64 / 2.0 {
            return Err(Error::InvalidConfig("pitch_max_hz must lie below the Nyquist frequency"));
        }
        if !(self.voicing_threshold >= 0.0 && self.voicing_threshold <= 1.0) {
            return Err(Error::InvalidConfig("voicing_threshold must lie in [0, 1]"));
        }
        if !(self.envelope_window_s > 0.0) {
            return Err(Error::InvalidConfig("envelope_window_s must be positive"));
        }
        if !(self.segment_rel_threshold > 0.0 && self.segment_rel_threshold < 1.0) {
            return Err(Error::InvalidConfig("segment_rel_threshold must lie in (0, 1)"));
        }
        if !(self.min_word_s > 0.0) {
            return Err(Error::InvalidConfig("min_word_s must be positive"));
        }
        if !(self.min_gap_s > 0.0) {
            return Err(Error::InvalidConfig("min_gap_s must be positive"));
        }
        if !self.spl_offset_db.is_finite() {
            return Err(Error::InvalidConfig("spl_offset_db must be finite"));
        }
        Ok(())
    }
}
