//! Autocorrelation pitch estimation.

use alloc::vec::Vec;

use super::config::AnalysisConfig;

/// Frames whose RMS is at or below this level are treated as silence
/// (10^(-60/20), a -60 dB full scale gate).
const SILENCE_RMS: f64 = 1e-3;

/// Peaks whose refined height reaches this fraction of the best peak
/// compete for the smallest lag. Autocorrelation of a periodic signal
/// peaks at every multiple of the period with near-equal height, and on
/// a sampled lag grid a multiple can beat the fundamental by a hair;
/// preferring the smallest lag within the band suppresses those
/// period-multiple (octave) errors.
const PEAK_HEIGHT_BAND: f64 = 0.95;

struct Peak {
    lag: f64,
    height: f64,
}

/// Estimates the fundamental frequency of one frame.
///
/// The energy-normalized autocorrelation is evaluated over the lag
/// range implied by `pitch_min_hz..pitch_max_hz` (clipped to the frame
/// length), every local maximum is refined by a three-point parabolic
/// fit, and the smallest lag whose refined height reaches 95% of the
/// best peak wins. Returns `None` for silent frames (RMS at or below
/// -60 dB full scale) and for frames whose winning peak falls below
/// `voicing_threshold`; otherwise the pitch in Hz, clamped to the
/// configured range.
pub fn estimate_pitch_frame(
    frame: &[f64],
    sample_rate: u32,
    config: &AnalysisConfig,
) -> Option<f64> {
    let n = frame.len();
    if n < 4 {
        return None;
    }
    let fs = sample_rate as f64;

    let energy: f64 = frame.iter().map(|x| x * x).sum();
    if libm::sqrt(energy / n as f64) <= SILENCE_RMS {
        return None;
    }

    let min_lag = (libm::ceil(fs / config.pitch_max_hz) as usize).max(1);
    let max_lag = (libm::floor(fs / config.pitch_min_hz) as usize).min(n - 1);
    if min_lag > max_lag {
        return None;
    }

    // Prefix sums of x^2 give both window energies in O(1) per lag.
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &x in frame {
        acc += x * x;
        prefix.push(acc);
    }

    // Evaluate one lag beyond each end of the range (where possible) so
    // peaks at the range edges still see both neighbors.
    let lo = (min_lag - 1).max(1);
    let hi = (max_lag + 1).min(n - 1);
    let mut r = Vec::with_capacity(hi - lo + 1);
    for lag in lo..=hi {
        let overlap = n - lag;
        let num: f64 = frame[..overlap]
            .iter()
            .zip(&frame[lag..])
            .map(|(a, b)| a * b)
            .sum();
        let denom = libm::sqrt(prefix[overlap] * (prefix[n] - prefix[lag]));
        r.push(if denom > 0.0 { num / denom } else { 0.0 });
    }
    let at = |lag: usize| r[lag - lo];

    let mut peaks: Vec<Peak> = Vec::new();
    let mut best_height = f64::NEG_INFINITY;
    for lag in min_lag..=max_lag {
        let cur = at(lag);
        let left = if lag > lo { at(lag - 1) } else { f64::NEG_INFINITY };
        let right = if lag < hi { at(lag + 1) } else { f64::NEG_INFINITY };
        if cur < left || cur < right {
            continue;
        }
        let (refined_lag, height) = if left.is_finite() && right.is_finite() {
            let curvature = left - 2.0 * cur + right;
            if curvature < 0.0 {
                let delta = (0.5 * (left - right) / curvature).clamp(-0.5, 0.5);
                (lag as f64 + delta, cur - 0.25 * (left - right) * delta)
            } else {
                (lag as f64, cur)
            }
        } else {
            (lag as f64, cur)
        };
        if height > best_height {
            best_height = height;
        }
        peaks.push(Peak { lag: refined_lag, height });
    }

    if best_height <= 0.0 {
        return None;
    }
    let winner = peaks
        .iter()
        .filter(|p| p.height >= PEAK_HEIGHT_BAND * best_height)
        .min_by(|a, b| a.lag.total_cmp(&b.lag))?;
    if winner.height < config.voicing_threshold {
        return None;
    }
    let pitch = fs / winner.lag;
    Some(pitch.clamp(config.pitch_min_hz, config.pitch_max_hz))
}
