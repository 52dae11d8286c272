//! Canonical in-memory audio representation.

use alloc::vec::Vec;

use crate::error::Error;

/// A mono audio signal with full-scale amplitudes in `[-1.0, 1.0]`.
///
/// Every extractor in the crate consumes this form; readers of on-disk
/// formats are expected to downmix and normalize into it.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioBuffer {
    /// Lowest accepted sample rate in Hz.
    pub const MIN_SAMPLE_RATE: u32 = 8000;

    /// Builds a buffer, validating the amplitude range and sample rate.
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self, Error> {
        if sample_rate < Self::MIN_SAMPLE_RATE {
            return Err(Error::InvalidBuffer("sample rate must be at least 8000 Hz"));
        }
        if !samples.iter().all(|s| (-1.0..=1.0).contains(s)) {
            return Err(Error::InvalidBuffer("samples must lie in [-1.0, 1.0]"));
        }
        Ok(Self { samples, sample_rate })
    }

    /// The sample sequence.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Sample rate in Hz.
    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Whether the buffer holds no samples.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Duration in seconds.
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Consumes the buffer, returning the sample sequence.
    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}
