//! Word segmentation and envelope timing measurements.

use alloc::vec::Vec;

use super::config::AnalysisConfig;

/// Fraction of the detection threshold used as the boundary floor when
/// word edges are widened outward to their feet.
const EDGE_FLOOR_FRACTION: f64 = 0.1;

/// One detected word with its envelope timings.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WordSegment {
    /// Segment start in seconds.
    pub start_s: f64,
    /// Segment end in seconds (exclusive).
    pub end_s: f64,
    /// Peak envelope amplitude inside the segment.
    pub peak_env: f64,
    /// 10% to 90% envelope rise time in seconds.
    pub ascend_s: f64,
    /// 90% to 10% envelope fall time in seconds.
    pub descend_s: f64,
}

impl WordSegment {
    /// Segment duration in seconds.
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

/// Detects word segments in an RMS envelope.
///
/// Maximal runs where the envelope exceeds `segment_rel_threshold`
/// times the global peak are located, runs separated by less than
/// `min_gap_s` merge into one, and merged runs shorter than
/// `min_word_s` are dropped. Each survivor is then widened outward to
/// the envelope floor (one tenth of the detection threshold, staying
/// clear of its neighbors) so that boundaries track word feet rather
/// than detection-threshold crossings, which would otherwise sit well
/// inside slow attacks and decays and inflate the measured gaps.
/// Ascend and descend times are measured per widened segment.
///
/// An all-silent envelope yields no segments. Returned segments are
/// time ordered and strictly disjoint.
pub fn segment_words(
    envelope: &[f64],
    sample_rate: u32,
    config: &AnalysisConfig,
) -> Vec<WordSegment> {
    let fs = sample_rate as f64;
    let peak = envelope.iter().fold(0.0f64, |m, &e| m.max(e));
    if peak <= 0.0 {
        return Vec::new();
    }
    let threshold = config.segment_rel_threshold * peak;
    let floor = EDGE_FLOOR_FRACTION * threshold;

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0usize;
    while i < envelope.len() {
        if envelope[i] > threshold {
            let start = i;
            while i < envelope.len() && envelope[i] > threshold {
                i += 1;
            }
            runs.push((start, i));
        } else {
            i += 1;
        }
    }

    let mut merged: Vec<(usize, usize)> = Vec::new();
    for run in runs {
        if let Some(last) = merged.last_mut() {
            if (run.0 - last.1) as f64 / fs < config.min_gap_s {
                last.1 = run.1;
                continue;
            }
        }
        merged.push(run);
    }
    merged.retain(|&(s, e)| (e - s) as f64 / fs >= config.min_word_s);

    let mut bounds: Vec<(usize, usize)> = Vec::with_capacity(merged.len());
    for (k, &(rs, re)) in merged.iter().enumerate() {
        let lower = bounds.last().map_or(0, |&(_, prev_end)| prev_end + 1);
        let upper = if k + 1 < merged.len() { merged[k + 1].0 - 1 } else { envelope.len() };
        let mut s = rs;
        while s > lower && envelope[s - 1] > floor {
            s -= 1;
        }
        let mut e = re;
        while e < upper && envelope[e] > floor {
            e += 1;
        }
        bounds.push((s, e));
    }

    bounds
        .into_iter()
        .map(|(s, e)| {
            let peak_env = envelope[s..e].iter().fold(0.0f64, |m, &v| m.max(v));
            let (ascend_s, descend_s) = measure_attack_decay(envelope, s, e, sample_rate);
            WordSegment {
                start_s: s as f64 / fs,
                end_s: e as f64 / fs,
                peak_env,
                ascend_s,
                descend_s,
            }
        })
        .collect()
}

/// Measures the 10% to 90% rise and 90% to 10% fall times of one
/// segment of an envelope.
///
/// The rise runs from the last sample below 10% of the segment peak
/// preceding the first 90% crossing up to that crossing; the fall runs
/// from the last sample at or above 90% to the first later sample below
/// 10%. Both searches may continue past the segment bounds (word feet
/// can extend slightly beyond them); both results clamp to the segment
/// duration. Flat or empty segments yield zero for both.
pub fn measure_attack_decay(
    envelope: &[f64],
    start: usize,
    end: usize,
    sample_rate: u32,
) -> (f64, f64) {
    if start >= end || end > envelope.len() {
        return (0.0, 0.0);
    }
    let fs = sample_rate as f64;
    let duration = (end - start) as f64 / fs;

    let mut peak = 0.0f64;
    let mut peak_idx = start;
    for (i, &v) in envelope.iter().enumerate().take(end).skip(start) {
        if v > peak {
            peak = v;
            peak_idx = i;
        }
    }
    if peak <= 0.0 {
        return (0.0, 0.0);
    }
    let hi = 0.9 * peak;
    let lo = 0.1 * peak;

    let mut i90 = peak_idx;
    for i in start..=peak_idx {
        if envelope[i] >= hi {
            i90 = i;
            break;
        }
    }
    let mut rise_start = i90;
    while rise_start > 0 && envelope[rise_start - 1] >= lo {
        rise_start -= 1;
    }
    let ascend = (((i90 - rise_start) as f64 / fs).min(duration)).max(0.0);

    let mut j90 = peak_idx;
    for i in (start..end).rev() {
        if envelope[i] >= hi {
            j90 = i;
            break;
        }
    }
    let mut fall_end = j90;
    while fall_end < envelope.len() && envelope[fall_end] >= lo {
        fall_end += 1;
    }
    if fall_end == envelope.len() && envelope[envelope.len() - 1] >= lo {
        // The fall never completes within the signal; measure to the
        // last sample so a flat tail reads as zero.
        fall_end = envelope.len() - 1;
    }
    let descend = (((fall_end - j90) as f64 / fs).min(duration)).max(0.0);

    (ascend, descend)
}

/// Mean silence between consecutive segments; `None` for fewer than two.
pub fn mean_word_gap(segments: &[WordSegment]) -> Option<f64> {
    if segments.len() < 2 {
        return None;
    }
    let total: f64 = segments.windows(2).map(|pair| pair[1].start_s - pair[0].end_s).sum();
    Some(total / (segments.len() - 1) as f64)
}
