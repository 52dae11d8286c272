//! Deterministic utterance synthesis with closed-form expected features.
//!
//! Words are sine carriers shaped by linear trapezoids, so pitch, level,
//! envelope timing, and gaps are all known analytically. The pair
//! [`synth_utterance`] / [`expected_features`] is the ground-truth
//! oracle for the extraction pipeline.

use alloc::vec;
use alloc::vec::Vec;

use crate::audio::AudioBuffer;
use crate::error::Error;
use crate::features::{samples_for, AnalysisConfig, FeatureVector};

/// One synthetic word: a sine carrier under a trapezoidal envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WordSpec {
    /// Carrier frequency in Hz; must lie in (0, sample_rate/2).
    pub f0_hz: f64,
    /// Peak amplitude in (0, 1].
    pub amplitude: f64,
    /// Linear rise duration in seconds.
    pub attack_s: f64,
    /// Full-amplitude duration in seconds.
    pub sustain_s: f64,
    /// Linear fall duration in seconds.
    pub decay_s: f64,
    /// Silence after the word in seconds; ignored for the last word.
    pub gap_after_s: f64,
}

/// A full utterance: leading silence, words with their gaps, trailing
/// silence.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UtteranceSpec {
    /// Output sample rate in Hz; at least 8000.
    pub sample_rate: u32,
    /// Silence before the first word, seconds.
    #[cfg_attr(feature = "serde", serde(default = "default_silence"))]
    pub lead_silence_s: f64,
    /// Silence after the last word, seconds.
    #[cfg_attr(feature = "serde", serde(default = "default_silence"))]
    pub trail_silence_s: f64,
    /// The words, in order; must be non-empty.
    pub words: Vec<WordSpec>,
}

#[cfg(feature = "serde")]
fn default_silence() -> f64 {
    0.2
}

impl UtteranceSpec {
    /// Checks the spec invariants.
    pub fn validate(&self) -> Result<(), Error> {
        if self.words.is_empty() {
            return Err(Error::InvalidSpec("words must be non-empty"));
        }
        if self.sample_rate < AudioBuffer::MIN_SAMPLE_RATE {
            return Err(Error::InvalidSpec("sample_rate must be at least 8000 Hz"));
        }
        let silence_ok = |s: f64| s.is_finite() && s >= 0.0;
        if !silence_ok(self.lead_silence_s) || !silence_ok(self.trail_silence_s) {
            return Err(Error::InvalidSpec("silences must be finite and non-negative"));
        }
        let nyquist = self.sample_rate as f64 / 2.0;
        for word in &self.words {
            if !(word.f0_hz.is_finite() && word.f0_hz > 0.0 && word.f0_hz < nyquist) {
                return Err(Error::InvalidSpec("f0_hz must lie in (0, sample_rate/2)"));
            }
            if !(word.amplitude.is_finite() && word.amplitude > 0.0 && word.amplitude <= 1.0) {
                return Err(Error::InvalidSpec("amplitude must lie in (0, 1]"));
            }
            let time_ok = |t: f64| t.is_finite() && t >= 0.0;
            if !(time_ok(word.attack_s) && time_ok(word.sustain_s) && time_ok(word.decay_s)) {
                return Err(Error::InvalidSpec(
                    "attack_s, sustain_s, decay_s must be finite and non-negative",
                ));
            }
            if word.attack_s + word.sustain_s + word.decay_s < 0.05 {
                return Err(Error::InvalidSpec(
                    "attack_s + sustain_s + decay_s must be at least 0.05 s",
                ));
            }
            if !time_ok(word.gap_after_s) {
                return Err(Error::InvalidSpec("gap_after_s must be finite and non-negative"));
            }
        }
        Ok(())
    }
}

/// Sample positions of one word on the output grid.
struct WordLayout {
    /// Index of the word's first sample.
    start: usize,
    /// Rendered word length in samples.
    n_word: usize,
    /// Silence after the word in samples; zero for the last word.
    n_gap: usize,
}

/// Converts a spec into per-word sample positions plus the total length.
///
/// Every part (lead, each word, each gap, trail) is rounded to whole
/// samples independently, so gap lengths on the grid are exactly
/// `round(gap_after_s * fs)` samples.
fn word_layout(spec: &UtteranceSpec) -> (Vec<WordLayout>, usize) {
    let fs = spec.sample_rate;
    let mut cursor = samples_for(spec.lead_silence_s, fs);
    let mut layouts = Vec::with_capacity(spec.words.len());
    for (i, word) in spec.words.iter().enumerate() {
        let n_word = samples_for(word.attack_s, fs)
            + samples_for(word.sustain_s, fs)
            + samples_for(word.decay_s, fs);
        let n_gap =
            if i + 1 < spec.words.len() { samples_for(word.gap_after_s, fs) } else { 0 };
        layouts.push(WordLayout { start: cursor, n_word, n_gap });
        cursor += n_word + n_gap;
    }
    (layouts, cursor + samples_for(spec.trail_silence_s, fs))
}

/// Unit trapezoid value at time `t` past the word start.
fn trapezoid(t: f64, attack: f64, sustain: f64, decay: f64) -> f64 {
    if t < 0.0 {
        0.0
    } else if t < attack {
        t / attack
    } else if t < attack + sustain {
        1.0
    } else {
        let fall = t - attack - sustain;
        if decay > 0.0 && fall < decay {
            1.0 - fall / decay
        } else {
            0.0
        }
    }
}

/// Renders a spec to an audio buffer.
///
/// Each word is `amplitude * trapezoid(t) * sin(2*pi*f0*t)` with `t`
/// measured from the word start, so every word begins at phase zero.
/// The result is deterministic, and scaling every amplitude by a
/// power of two scales the buffer exactly sample-wise.
pub fn synth_utterance(spec: &UtteranceSpec) -> Result<AudioBuffer, Error> {
    spec.validate()?;
    let fs = spec.sample_rate as f64;
    let (layouts, total) = word_layout(spec);
    let mut samples = vec![0.0f64; total];
    for (word, layout) in spec.words.iter().zip(&layouts) {
        let omega = 2.0 * core::f64::consts::PI * word.f0_hz;
        for i in 0..layout.n_word {
            let t = i as f64 / fs;
            let envelope = trapezoid(t, word.attack_s, word.sustain_s, word.decay_s);
            samples[layout.start + i] = word.amplitude * envelope * libm::sin(omega * t);
        }
    }
    AudioBuffer::new(samples, spec.sample_rate)
}

/// Expected features of a spec plus the tolerance inside which the
/// extraction pipeline must land.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExpectedFeatures {
    /// Closed-form expected values.
    pub features: FeatureVector,
    /// Per-component tolerances.
    pub tolerances: FeatureTolerances,
}

/// Per-component tolerances for comparing measured against expected
/// features.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureTolerances {
    /// Pitch tolerance as a fraction of the expected value.
    pub pitch_rel: f64,
    /// Level tolerance in dB.
    pub spl_db: f64,
    /// Ascend-time tolerance in seconds.
    pub ascend_s: f64,
    /// Descend-time tolerance in seconds.
    pub descend_s: f64,
    /// Gap tolerance in seconds.
    pub gap_s: f64,
}

/// Computes the features the extraction pipeline should measure for a
/// spec, in closed form.
///
/// Pitch is the amplitude-weighted mean carrier frequency. Ascend and
/// descend are 0.8 times the attack and decay (the 10% to 90% span of
/// a linear ramp), floored at one envelope window since the windowed
/// RMS cannot resolve faster edges. Gaps are the constructed silences
/// on the sample grid. Level replays the analysis frame grid: frames
/// whose centers fall inside a word contribute the exact integral of
/// the squared waveform over their span (the sine carrier contributes
/// its mean power of one half), and the pooled mean square converts to
/// dB. Time tolerances are 15 ms or one envelope window, whichever is
/// larger; pitch is 1%, level 0.5 dB.
///
/// The spec and config are assumed valid.
pub fn expected_features(spec: &UtteranceSpec, config: &AnalysisConfig) -> ExpectedFeatures {
    let fs = spec.sample_rate as f64;
    let (layouts, total) = word_layout(spec);
    let n = spec.words.len();
    let window_s = samples_for(config.envelope_window_s, spec.sample_rate).max(1) as f64 / fs;

    let amp_sum: f64 = spec.words.iter().map(|w| w.amplitude).sum();
    let pitch_hz = spec.words.iter().map(|w| w.amplitude * w.f0_hz).sum::<f64>() / amp_sum;

    let edge_mean = |edge: fn(&WordSpec) -> f64| {
        spec.words.iter().map(|w| (0.8 * edge(w)).max(window_s)).sum::<f64>() / n as f64
    };
    let ascend_s = edge_mean(|w| w.attack_s);
    let descend_s = edge_mean(|w| w.decay_s);

    let gap_s = (n >= 2).then(|| {
        layouts[..n - 1].iter().map(|l| l.n_gap as f64).sum::<f64>() / ((n - 1) as f64 * fs)
    });

    let frame_len = samples_for(config.frame_len_s, spec.sample_rate);
    let hop = samples_for(config.hop_s, spec.sample_rate).max(1);
    let mut ms_sum = 0.0f64;
    let mut in_word_frames = 0usize;
    if frame_len > 0 {
        let mut start = 0usize;
        while start + frame_len <= total {
            let center = (start as f64 + frame_len as f64 / 2.0) / fs;
            let in_word = layouts.iter().any(|l| {
                center >= l.start as f64 / fs && center < (l.start + l.n_word) as f64 / fs
            });
            if in_word {
                let x0 = start as f64 / fs;
                let x1 = (start + frame_len) as f64 / fs;
                let energy: f64 = spec
                    .words
                    .iter()
                    .zip(&layouts)
                    .map(|(w, l)| word_energy(w, l.start as f64 / fs, x0, x1))
                    .sum();
                ms_sum += energy / (frame_len as f64 / fs);
                in_word_frames += 1;
            }
            start += hop;
        }
    }
    let spl_db = (in_word_frames > 0).then(|| {
        let mean_square = ms_sum / in_word_frames as f64;
        10.0 * libm::log10(if mean_square > 1e-12 { mean_square } else { 1e-12 })
            + config.spl_offset_db
    });

    let time_tol = 0.015f64.max(window_s);
    ExpectedFeatures {
        features: FeatureVector {
            pitch_hz: Some(pitch_hz),
            spl_db,
            ascend_s: Some(ascend_s),
            descend_s: Some(descend_s),
            gap_s,
        },
        tolerances: FeatureTolerances {
            pitch_rel: 0.01,
            spl_db: 0.5,
            ascend_s: time_tol,
            descend_s: time_tol,
            gap_s: 0.015,
        },
    }
}

/// Integral of the squared waveform of one word over `[x0, x1)` in
/// absolute seconds, given the word's start time.
fn word_energy(word: &WordSpec, start_s: f64, x0: f64, x1: f64) -> f64 {
    let attack = word.attack_s;
    let sustain = word.sustain_s;
    let decay = word.decay_s;
    let lo = (x0 - start_s).max(0.0);
    let hi = (x1 - start_s).min(attack + sustain + decay);
    if hi <= lo {
        return 0.0;
    }
    let cube = |x: f64| x * x * x;
    let mut energy = 0.0;

    let (p0, p1) = (lo, hi.min(attack));
    if p1 > p0 && attack > 0.0 {
        energy += (cube(p1) - cube(p0)) / (3.0 * attack * attack);
    }
    let (p0, p1) = (lo.max(attack), hi.min(attack + sustain));
    if p1 > p0 {
        energy += p1 - p0;
    }
    let (p0, p1) = (lo.max(attack + sustain), hi);
    if p1 > p0 && decay > 0.0 {
        let v0 = 1.0 - (p0 - attack - sustain) / decay;
        let v1 = 1.0 - (p1 - attack - sustain) / decay;
        energy += decay * (cube(v0) - cube(v1)) / 3.0;
    }

    // Trapezoid power times the sine carrier's mean power of one half.
    0.5 * word.amplitude * word.amplitude * energy
}
