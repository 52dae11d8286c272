//! Offline vocal emotion analysis primitives.
//!
//! The crate measures four vocal parameters of a mono recording: mean
//! pitch (Hz), mean sound pressure level (dB full scale plus a
//! calibration offset), the ascend and descend times of the amplitude
//! envelope per word (seconds), and the mean silence between
//! consecutive words (seconds). A per-speaker baseline calibrated from
//! normal-state recordings turns a measurement into a deviation vector,
//! and a small rule set classifies the deviation as normal, angry, or
//! panicked (with an indeterminate fallback).
//!
//! A deterministic synthesizer ([`synth_utterance`]) renders utterances
//! whose parameters are known in closed form ([`expected_features`]);
//! it is the ground-truth oracle for the extraction pipeline.
//!
//! The crate is `no_std` and requires `alloc`. File formats and the
//! command-line front end live in the companion `emovox-cli` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod audio;
pub mod emotion;
pub mod error;
pub mod features;
pub mod synth;

pub use audio::AudioBuffer;
pub use emotion::{
    calibrate, classify, compute_deviation, rule_trace, BaselineProfile, DeviationVector,
    EmotionLabel, EmotionReport, FiredRule, NormalBand, RuleTraceEntry, ThresholdConfig,
};
pub use error::{Error, FrameStats};
pub use features::{
    compute_frame_spl, estimate_pitch_frame, extract_envelope, extract_features, frame_signal,
    mean_word_gap, measure_attack_decay, segment_words, AnalysisConfig, FeatureVector, Frame,
    WordSegment,
};
pub use synth::{
    expected_features, synth_utterance, ExpectedFeatures, FeatureTolerances, UtteranceSpec,
    WordSpec,
};
