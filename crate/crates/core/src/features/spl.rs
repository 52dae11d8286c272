//! Level measurement in dB relative to digital full scale.

use super::config::AnalysisConfig;

/// RMS floor preventing a log of zero; corresponds to -120 dB.
const RMS_FLOOR: f64 = 1e-6;

/// Mean of the squared samples of a window.
pub(crate) fn mean_square(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let sum: f64 = samples.iter().map(|x| x * x).sum();
    sum / samples.len() as f64
}

/// Converts an RMS amplitude to dB, flooring at -120 dB before adding
/// the calibration offset.
pub(crate) fn rms_db(rms: f64, offset_db: f64) -> f64 {
    20.0 * libm::log10(if rms > RMS_FLOOR { rms } else { RMS_FLOOR }) + offset_db
}

/// Computes one frame's sound pressure level.
///
/// The value is dB relative to digital full scale (RMS 1.0 maps to
/// 0 dB) plus `spl_offset_db`. Silent frames floor at -120 dB.
pub fn compute_frame_spl(frame: &[f64], config: &AnalysisConfig) -> f64 {
    rms_db(libm::sqrt(mean_square(frame)), config.spl_offset_db)
}
