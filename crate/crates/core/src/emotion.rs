//! Baseline calibration, deviation analysis, and rule-based
//! classification into normal, angry, and panicked states.

use alloc::vec::Vec;

use crate::error::Error;
use crate::features::FeatureVector;

/// Half-widths of the band around the baseline inside which an
/// utterance still counts as normal.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct NormalBand {
    /// Pitch half-width in percent.
    pub pitch_pct: f64,
    /// Level half-width in dB.
    pub spl_db: f64,
    /// Ascend-time half-width in percent.
    pub ascend_pct: f64,
    /// Descend-time half-width in percent.
    pub descend_pct: f64,
    /// Gap half-width in percent.
    pub gap_pct: f64,
}

impl Default for NormalBand {
    fn default() -> Self {
        Self { pitch_pct: 5.0, spl_db: 3.0, ascend_pct: 5.0, descend_pct: 5.0, gap_pct: 5.0 }
    }
}

/// Decision thresholds of the emotion classifier.
///
/// Defaults sit midway between the normal band and the smallest
/// deviations observed for each emotional state, so all the reference
/// fixtures classify with margin while the thresholds stay tunable.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ThresholdConfig {
    /// Minimum pitch rise in percent for both angry and panicked.
    pub pitch_up_pct: f64,
    /// Minimum level rise in dB for angry; panicked requires staying below.
    pub spl_up_db: f64,
    /// Maximum (most negative) gap change in percent for angry.
    pub gap_down_pct: f64,
    /// Minimum gap rise in percent for panicked.
    pub gap_up_pct: f64,
    /// Minimum ascend-time rise in percent for panicked.
    pub ascend_up_pct: f64,
    /// Band around the baseline classified as normal.
    pub normal_band: NormalBand,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            pitch_up_pct: 10.0,
            spl_up_db: 8.0,
            gap_down_pct: -10.0,
            gap_up_pct: 5.0,
            ascend_up_pct: 5.0,
            normal_band: NormalBand::default(),
        }
    }
}

impl ThresholdConfig {
    /// Checks the threshold invariants.
    pub fn validate(&self) -> Result<(), Error> {
        let band = &self.normal_band;
        let widths =
            [band.pitch_pct, band.spl_db, band.ascend_pct, band.descend_pct, band.gap_pct];
        if !widths.iter().all(|w| w.is_finite() && *w > 0.0) {
            return Err(Error::InvalidThresholds("normal band half-widths must be positive"));
        }
        if !(self.pitch_up_pct.is_finite() && self.pitch_up_pct > band.pitch_pct) {
            return Err(Error::InvalidThresholds(
                "pitch_up_pct must exceed the normal band pitch half-width",
            ));
        }
        if !(self.spl_up_db.is_finite() && self.spl_up_db > band.spl_db) {
            return Err(Error::InvalidThresholds(
                "spl_up_db must exceed the normal band spl half-width",
            ));
        }
        if !(self.gap_down_pct.is_finite() && self.gap_down_pct < 0.0) {
            return Err(Error::InvalidThresholds("gap_down_pct must be negative"));
        }
        if !(self.gap_up_pct.is_finite() && self.gap_up_pct > 0.0) {
            return Err(Error::InvalidThresholds("gap_up_pct must be positive"));
        }
        if !(self.ascend_up_pct.is_finite() && self.ascend_up_pct > 0.0) {
            return Err(Error::InvalidThresholds("ascend_up_pct must be positive"));
        }
        Ok(())
    }
}

/// Per-speaker baseline: the central tendency and spread of normal-state
/// feature vectors.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BaselineProfile {
    /// Per-attribute arithmetic mean.
    pub mean: FeatureVector,
    /// Per-attribute population standard deviation, same units as `mean`.
    pub std: FeatureVector,
    /// Number of recordings that contributed.
    pub n_samples: usize,
}

/// Per-attribute difference between an utterance and a baseline: percent
/// relative change for the time and pitch attributes, absolute dB for
/// level (dB is already a relative measure).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeviationVector {
    /// Pitch change, percent of baseline.
    pub pitch_pct: Option<f64>,
    /// Level change, dB.
    pub spl_db: Option<f64>,
    /// Ascend-time change, percent of baseline.
    pub ascend_pct: Option<f64>,
    /// Descend-time change, percent of baseline.
    pub descend_pct: Option<f64>,
    /// Gap change, percent of baseline.
    pub gap_pct: Option<f64>,
}

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum EmotionLabel {
    /// Every deviation lies inside the normal band.
    Normal,
    /// Raised pitch and level with shortened gaps.
    Angry,
    /// Raised pitch, longer gaps, slower attacks, level not angry-loud.
    Panicked,
    /// No rule matched.
    Indeterminate,
}

impl EmotionLabel {
    /// Lowercase label name.
    pub fn as_str(&self) -> &'static str {
        match self {
            EmotionLabel::Normal => "normal",
            EmotionLabel::Angry => "angry",
            EmotionLabel::Panicked => "panicked",
            EmotionLabel::Indeterminate => "indeterminate",
        }
    }
}

/// One satisfied condition of the winning rule.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FiredRule {
    /// Dotted condition name, for example `"angry.pitch_up"`.
    pub name: &'static str,
    /// How far past the threshold the value sits, as a fraction of the
    /// threshold (band fraction remaining for normal conditions).
    pub margin: f64,
}

/// Full classification result.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EmotionReport {
    /// Winning label.
    pub label: EmotionLabel,
    /// Deviation vector the decision was made on.
    pub deviations: DeviationVector,
    /// Smallest margin of the winning rule, clamped to [0, 1];
    /// zero for indeterminate.
    pub confidence: f64,
    /// Conditions of the winning rule; empty for indeterminate.
    pub fired_rules: Vec<FiredRule>,
    /// Thresholds the decision used.
    pub thresholds_used: ThresholdConfig,
}

/// One evaluated condition of one rule.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RuleTraceEntry {
    /// Rule the condition belongs to: `"normal"`, `"angry"`, or
    /// `"panicked"`.
    pub rule: &'static str,
    /// Dotted condition name, for example `"angry.pitch_up"`.
    pub condition: &'static str,
    /// Deviation component the condition reads; absent when unmeasured.
    pub value: Option<f64>,
    /// Threshold the value is compared against (band half-width for
    /// normal conditions).
    pub threshold: f64,
    /// Whether the condition holds. Absent values never satisfy.
    pub satisfied: bool,
    /// Signed margin, positive when comfortably satisfied; absent with
    /// the value.
    pub margin: Option<f64>,
}

/// Calibrates a baseline profile from normal-state feature vectors.
///
/// Mean is the per-attribute arithmetic mean, spread the per-attribute
/// population standard deviation. An attribute absent in any input
/// vector is absent in the profile: a baseline must not claim a typical
/// value for a parameter it could not measure consistently.
pub fn calibrate(vectors: &[FeatureVector]) -> Result<BaselineProfile, Error> {
    if vectors.is_empty() {
        return Err(Error::EmptyCalibration);
    }
    fn stat(vectors: &[FeatureVector], get: fn(&FeatureVector) -> Option<f64>) -> [Option<f64>; 2] {
        let mut values = Vec::with_capacity(vectors.len());
        for v in vectors {
            match get(v) {
                Some(x) => values.push(x),
                None => return [None, None],
            }
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        [Some(mean), Some(libm::sqrt(var))]
    }

    let pitch = stat(vectors, |v| v.pitch_hz);
    let spl = stat(vectors, |v| v.spl_db);
    let ascend = stat(vectors, |v| v.ascend_s);
    let descend = stat(vectors, |v| v.descend_s);
    let gap = stat(vectors, |v| v.gap_s);
    Ok(BaselineProfile {
        mean: FeatureVector {
            pitch_hz: pitch[0],
            spl_db: spl[0],
            ascend_s: ascend[0],
            descend_s: descend[0],
            gap_s: gap[0],
        },
        std: FeatureVector {
            pitch_hz: pitch[1],
            spl_db: spl[1],
            ascend_s: ascend[1],
            descend_s: descend[1],
            gap_s: gap[1],
        },
        n_samples: vectors.len(),
    })
}

/// Computes the deviation of an utterance from a baseline.
///
/// Pitch, ascend, descend, and gap deviate as percent relative change
/// against the baseline mean; level deviates as an absolute dB
/// difference. A component is absent whenever either input lacks it.
/// A baseline mean of exactly zero for a percent attribute cannot
/// anchor a relative change and is a degenerate-baseline error (only
/// raised when the feature side is present).
pub fn compute_deviation(
    features: &FeatureVector,
    baseline: &BaselineProfile,
) -> Result<DeviationVector, Error> {
    fn pct(
        feature: Option<f64>,
        base: Option<f64>,
        attribute: &'static str,
    ) -> Result<Option<f64>, Error> {
        match (feature, base) {
            (Some(f), Some(b)) => {
                if b == 0.0 {
                    Err(Error::DegenerateBaseline { attribute })
                } else {
                    Ok(Some((f - b) / b * 100.0))
                }
            }
            _ => Ok(None),
        }
    }

    Ok(DeviationVector {
        pitch_pct: pct(features.pitch_hz, baseline.mean.pitch_hz, "pitch_hz")?,
        spl_db: match (features.spl_db, baseline.mean.spl_db) {
            (Some(f), Some(b)) => Some(f - b),
            _ => None,
        },
        ascend_pct: pct(features.ascend_s, baseline.mean.ascend_s, "ascend_s")?,
        descend_pct: pct(features.descend_s, baseline.mean.descend_s, "descend_s")?,
        gap_pct: pct(features.gap_s, baseline.mean.gap_s, "gap_s")?,
    })
}

/// Comparison direction of one rule condition.
enum Cmp {
    /// Satisfied when `value >= threshold`.
    AtLeast,
    /// Satisfied when `value <= threshold`.
    AtMost,
    /// Satisfied when `value < threshold`.
    Below,
    /// Satisfied when `|value| <= threshold` (normal band).
    Within,
}

/// Evaluates every condition of every rule against a deviation vector.
///
/// The trace carries one entry per condition: three for angry, four for
/// panicked, five for normal. Margins are signed distances from the
/// threshold in units of the threshold (for the normal band, the
/// fraction of the half-width still unused), so a positive margin means
/// the condition holds with room to spare.
pub fn rule_trace(deviation: &DeviationVector, thresholds: &ThresholdConfig) -> Vec<RuleTraceEntry> {
    let band = &thresholds.normal_band;
    let rows: [(&'static str, &'static str, Option<f64>, f64, Cmp); 12] = [
        ("normal", "normal.pitch", deviation.pitch_pct, band.pitch_pct, Cmp::Within),
        ("normal", "normal.spl", deviation.spl_db, band.spl_db, Cmp::Within),
        ("normal", "normal.ascend", deviation.ascend_pct, band.ascend_pct, Cmp::Within),
        ("normal", "normal.descend", deviation.descend_pct, band.descend_pct, Cmp::Within),
        ("normal", "normal.gap", deviation.gap_pct, band.gap_pct, Cmp::Within),
        ("angry", "angry.pitch_up", deviation.pitch_pct, thresholds.pitch_up_pct, Cmp::AtLeast),
        ("angry", "angry.spl_up", deviation.spl_db, thresholds.spl_up_db, Cmp::AtLeast),
        ("angry", "angry.gap_down", deviation.gap_pct, thresholds.gap_down_pct, Cmp::AtMost),
        ("panicked", "panicked.pitch_up", deviation.pitch_pct, thresholds.pitch_up_pct, Cmp::AtLeast),
        ("panicked", "panicked.gap_up", deviation.gap_pct, thresholds.gap_up_pct, Cmp::AtLeast),
        ("panicked", "panicked.ascend_up", deviation.ascend_pct, thresholds.ascend_up_pct, Cmp::AtLeast),
        ("panicked", "panicked.spl_below", deviation.spl_db, thresholds.spl_up_db, Cmp::Below),
    ];

    rows.into_iter()
        .map(|(rule, condition, value, threshold, cmp)| {
            let abs = libm::fabs;
            let (satisfied, margin) = match value {
                None => (false, None),
                Some(v) => match cmp {
                    Cmp::AtLeast => (v >= threshold, Some((v - threshold) / abs(threshold))),
                    Cmp::AtMost => (v <= threshold, Some((threshold - v) / abs(threshold))),
                    Cmp::Below => (v < threshold, Some((threshold - v) / abs(threshold))),
                    Cmp::Within => (abs(v) <= threshold, Some(1.0 - abs(v) / threshold)),
                },
            };
            RuleTraceEntry { rule, condition, value, threshold, satisfied, margin }
        })
        .collect()
}

/// Classifies a deviation vector.
///
/// Rules are evaluated in order: normal (every component inside the
/// band, so near-baseline utterances never fall through to
/// indeterminate on one marginal component), then angry (pitch and
/// level up, gaps down), then panicked (pitch up, gaps and ascend time
/// up, level below the angry threshold), else indeterminate. A rule
/// only matches when every component it reads is present. Confidence
/// is the winning rule's smallest margin clamped to [0, 1]; zero for
/// indeterminate. Angry and panicked are mutually exclusive by
/// construction (opposite level conditions).
pub fn classify(deviation: &DeviationVector, thresholds: &ThresholdConfig) -> EmotionReport {
    let trace = rule_trace(deviation, thresholds);
    let rule_holds =
        |rule: &str| trace.iter().filter(|e| e.rule == rule).all(|e| e.satisfied);

    let label = if rule_holds("normal") {
        EmotionLabel::Normal
    } else if rule_holds("angry") {
        EmotionLabel::Angry
    } else if rule_holds("panicked") {
        EmotionLabel::Panicked
    } else {
        EmotionLabel::Indeterminate
    };

    let (confidence, fired_rules) = if label == EmotionLabel::Indeterminate {
        (0.0, Vec::new())
    } else {
        let mut confidence = f64::INFINITY;
        let mut fired = Vec::new();
        for entry in trace.iter().filter(|e| e.rule == label.as_str()) {
            let margin = entry.margin.unwrap_or(0.0);
            confidence = confidence.min(margin);
            fired.push(FiredRule { name: entry.condition, margin });
        }
        (confidence.clamp(0.0, 1.0), fired)
    };

    EmotionReport {
        label,
        deviations: *deviation,
        confidence,
        fired_rules,
        thresholds_used: thresholds.clone(),
    }
}
