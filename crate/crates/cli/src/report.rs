//! Output documents and rounding.
//!
//! Every number the tool prints or stores is rounded to six significant
//! digits before serialization, so emitted documents parse back to
//! exactly the values shown.

use serde::Serialize;

use emovox_core::{
    AnalysisConfig, BaselineProfile, DeviationVector, EmotionReport, ExpectedFeatures,
    FeatureTolerances, FeatureVector, ThresholdConfig,
};

/// Header line for analysis reports in CSV form.
pub const CSV_HEADER: &str = "pitch_hz,spl_db,ascend_s,descend_s,gap_s,label,confidence";

/// Header line for bare feature vectors in CSV form.
pub const FEATURES_CSV_HEADER: &str = "pitch_hz,spl_db,ascend_s,descend_s,gap_s";

/// Rounds to six significant digits.
pub fn sig6(value: f64) -> f64 {
    if value == 0.0 || !value.is_finite() {
        return value;
    }
    let scale = 10f64.powi(5 - value.abs().log10().floor() as i32);
    (value * scale).round() / scale
}

fn sig6_opt(value: Option<f64>) -> Option<f64> {
    value.map(sig6)
}

/// Rounds every component of a feature vector.
pub fn round_features(f: &FeatureVector) -> FeatureVector {
    FeatureVector {
        pitch_hz: sig6_opt(f.pitch_hz),
        spl_db: sig6_opt(f.spl_db),
        ascend_s: sig6_opt(f.ascend_s),
        descend_s: sig6_opt(f.descend_s),
        gap_s: sig6_opt(f.gap_s),
    }
}

/// Rounds every component of a baseline profile.
pub fn round_profile(p: &BaselineProfile) -> BaselineProfile {
    BaselineProfile {
        mean: round_features(&p.mean),
        std: round_features(&p.std),
        n_samples: p.n_samples,
    }
}

fn round_deviations(d: &DeviationVector) -> DeviationVector {
    DeviationVector {
        pitch_pct: sig6_opt(d.pitch_pct),
        spl_db: sig6_opt(d.spl_db),
        ascend_pct: sig6_opt(d.ascend_pct),
        descend_pct: sig6_opt(d.descend_pct),
        gap_pct: sig6_opt(d.gap_pct),
    }
}

/// Rounds a synthesis oracle for printing.
pub fn round_expected(e: &ExpectedFeatures) -> ExpectedFeatures {
    ExpectedFeatures {
        features: round_features(&e.features),
        tolerances: FeatureTolerances {
            pitch_rel: sig6(e.tolerances.pitch_rel),
            spl_db: sig6(e.tolerances.spl_db),
            ascend_s: sig6(e.tolerances.ascend_s),
            descend_s: sig6(e.tolerances.descend_s),
            gap_s: sig6(e.tolerances.gap_s),
        },
    }
}

/// One classifier condition that fired, with its margin.
#[derive(Debug, Clone, Serialize)]
pub struct FiredRuleDoc {
    pub name: String,
    pub margin: f64,
}

/// Full analysis report for one recording.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub version: String,
    pub input: String,
    pub features: FeatureVector,
    pub baseline: BaselineProfile,
    pub deviations: DeviationVector,
    pub label: String,
    pub confidence: f64,
    pub fired_rules: Vec<FiredRuleDoc>,
    pub analysis_config: AnalysisConfig,
    pub thresholds: ThresholdConfig,
}

impl ReportDocument {
    pub fn new(
        input: &str,
        features: &FeatureVector,
        baseline: &BaselineProfile,
        report: &EmotionReport,
        config: &AnalysisConfig,
    ) -> Self {
        ReportDocument {
            version: env!("CARGO_PKG_VERSION").to_string(),
            input: input.to_string(),
            features: round_features(features),
            baseline: round_profile(baseline),
            deviations: round_deviations(&report.deviations),
            label: report.label.as_str().to_string(),
            confidence: sig6(report.confidence),
            fired_rules: report
                .fired_rules
                .iter()
                .map(|r| FiredRuleDoc { name: r.name.to_string(), margin: sig6(r.margin) })
                .collect(),
            analysis_config: config.clone(),
            thresholds: report.thresholds_used.clone(),
        }
    }

    /// Renders the report as a two-line CSV document.
    pub fn to_csv(&self) -> String {
        let mut line = String::new();
        for v in [
            self.features.pitch_hz,
            self.features.spl_db,
            self.features.ascend_s,
            self.features.descend_s,
            self.features.gap_s,
        ] {
            match v {
                Some(v) => line.push_str(&format!("{v},")),
                None => line.push(','),
            }
        }
        line.push_str(&format!("{},{}", self.label, self.confidence));
        format!("{CSV_HEADER}\n{line}\n")
    }
}

/// Renders a bare feature vector as a two-line CSV document.
pub fn features_csv(f: &FeatureVector) -> String {
    let cells: Vec<String> = [f.pitch_hz, f.spl_db, f.ascend_s, f.descend_s, f.gap_s]
        .iter()
        .map(|v| v.map(|v| v.to_string()).unwrap_or_default())
        .collect();
    format!("{}\n{}\n", FEATURES_CSV_HEADER, cells.join(","))
}
