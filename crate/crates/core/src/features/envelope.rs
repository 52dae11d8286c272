//! Amplitude envelope by centered windowed RMS.

use alloc::vec::Vec;

use crate::audio::AudioBuffer;

use super::config::AnalysisConfig;
use super::framing::samples_for;

/// Maps an out-of-range index into `0..len` by mirror reflection.
fn reflect(mut idx: isize, len: isize) -> usize {
    loop {
        if idx < 0 {
            idx = -1 - idx;
        } else if idx >= len {
            idx = 2 * len - 1 - idx;
        } else {
            return idx as usize;
        }
    }
}

/// Computes the RMS amplitude envelope of a buffer.
///
/// Each output sample is the RMS over a centered window of
/// `round(envelope_window_s * fs)` samples; positions where the window
/// extends past the buffer edges are filled by reflection, so an
/// utterance starting at sample zero still gets a sane rise. The result
/// has the same length as the input.
pub fn extract_envelope(buffer: &AudioBuffer, config: &AnalysisConfig) -> Vec<f64> {
    let samples = buffer.samples();
    let len = samples.len();
    if len == 0 {
        return Vec::new();
    }
    let w = samples_for(config.envelope_window_s, buffer.sample_rate()).max(1);
    let front = w / 2;
    let back = w - front;
    let ilen = len as isize;

    let mut prefix = Vec::with_capacity(len + front + back + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for i in 0..(len + front + back) {
        let s = samples[reflect(i as isize - front as isize, ilen)];
        acc += s * s;
        prefix.push(acc);
    }

    let inv_w = 1.0 / w as f64;
    (0..len)
        .map(|n| libm::sqrt(((prefix[n + w] - prefix[n]) * inv_w).max(0.0)))
        .collect()
}
