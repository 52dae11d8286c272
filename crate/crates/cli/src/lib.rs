//! Command-line front end for the vocal-parameter toolkit.
//!
//! Four commands: `calibrate` builds a speaker baseline from
//! normal-state recordings, `analyze` classifies a recording against a
//! baseline, `features` dumps the bare feature vector, and `synth`
//! renders a synthetic utterance with analytically known features.
//!
//! Exit codes: 0 on success, 1 for usage or specification errors, 2
//! for defective input content. Stdout carries only the output
//! document; diagnostics go to stderr.

mod report;
mod wav;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use emovox_core::{
    calibrate, classify, compute_deviation, expected_features, extract_features, synth_utterance,
    AnalysisConfig, BaselineProfile, Error as CoreError, ThresholdConfig, UtteranceSpec,
};
use report::ReportDocument;

/// Parses `args` (including the program name) and runs the selected
/// command, returning the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return parse_exit_code(err.kind());
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.code()
        }
    }
}

fn parse_exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
        _ => 1,
    }
}

enum CliError {
    /// Wrong invocation or invalid specification.
    Usage(String),
    /// Well-formed command, defective input content.
    Input(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) => m,
        }
    }
}

fn core_err(err: CoreError) -> CliError {
    match err {
        CoreError::InvalidConfig(_)
        | CoreError::InvalidThresholds(_)
        | CoreError::InvalidSpec(_) => CliError::Usage(err.to_string()),
        _ => CliError::Input(err.to_string()),
    }
}

fn with_path(path: &Path, err: CliError) -> CliError {
    match err {
        CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
        usage => usage,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "emovox",
    version,
    about = "Offline vocal-parameter extraction and speaker-relative emotion classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a speaker baseline profile from normal-state recordings
    Calibrate {
        /// Input WAV recordings
        #[arg(value_name = "WAV", required = true)]
        inputs: Vec<PathBuf>,
        /// Where to write the baseline profile JSON
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[command(flatten)]
        analysis: AnalysisFlags,
    },
    /// Classify a recording against a baseline profile
    Analyze {
        /// Input WAV recording
        #[arg(value_name = "WAV")]
        input: PathBuf,
        /// Baseline profile JSON written by `calibrate`
        #[arg(long, value_name = "FILE")]
        baseline: PathBuf,
        /// Output format
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        analysis: AnalysisFlags,
        #[command(flatten)]
        thresholds: ThresholdFlags,
    },
    /// Extract the feature vector of a recording without classifying
    Features {
        /// Input WAV recording
        #[arg(value_name = "WAV")]
        input: PathBuf,
        /// Output format
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        analysis: AnalysisFlags,
    },
    /// Render a synthetic utterance and print its expected features
    Synth {
        /// Utterance spec JSON
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Where to write the rendered WAV
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[command(flatten)]
        analysis: AnalysisFlags,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Analysis overrides; unset flags keep the documented defaults.
#[derive(Debug, Args)]
struct AnalysisFlags {
    /// Analysis frame length in seconds
    #[arg(long, value_name = "S")]
    frame_len_s: Option<f64>,
    /// Hop between frame starts in seconds
    #[arg(long, value_name = "S")]
    hop_s: Option<f64>,
    /// Lower bound of the pitch search range in Hz
    #[arg(long, value_name = "HZ")]
    pitch_min_hz: Option<f64>,
    /// Upper bound of the pitch search range in Hz
    #[arg(long, value_name = "HZ")]
    pitch_max_hz: Option<f64>,
    /// Minimum normalized autocorrelation peak for a voiced frame
    #[arg(long, value_name = "X")]
    voicing_threshold: Option<f64>,
    /// RMS envelope window length in seconds
    #[arg(long, value_name = "S")]
    envelope_window_s: Option<f64>,
    /// Word detection threshold as a fraction of the peak envelope
    #[arg(long, value_name = "X")]
    segment_rel_threshold: Option<f64>,
    /// Shortest envelope run kept as a word, in seconds
    #[arg(long, value_name = "S")]
    min_word_s: Option<f64>,
    /// Shortest silence treated as a word boundary, in seconds
    #[arg(long, value_name = "S")]
    min_gap_s: Option<f64>,
    /// Calibration offset added to every reported level, in dB
    #[arg(long, value_name = "DB", allow_negative_numbers = true)]
    spl_offset_db: Option<f64>,
}

impl AnalysisFlags {
    fn to_config(&self) -> AnalysisConfig {
        let mut c = AnalysisConfig::default();
        if let Some(v) = self.frame_len_s {
            c.frame_len_s = v;
        }
        if let Some(v) = self.hop_s {
            c.hop_s = v;
        }
        if let Some(v) = self.pitch_min_hz {
            c.pitch_min_hz = v;
        }
        if let Some(v) = self.pitch_max_hz {
            c.pitch_max_hz = v;
        }
        if let Some(v) = self.voicing_threshold {
            c.voicing_threshold = v;
        }
        if let Some(v) = self.envelope_window_s {
            c.envelope_window_s = v;
        }
        if let Some(v) = self.segment_rel_threshold {
            c.segment_rel_threshold = v;
        }
        if let Some(v) = self.min_word_s {
            c.min_word_s = v;
        }
        if let Some(v) = self.min_gap_s {
            c.min_gap_s = v;
        }
        if let Some(v) = self.spl_offset_db {
            c.spl_offset_db = v;
        }
        c
    }
}

/// Classifier threshold overrides; unset flags keep the documented
/// defaults.
#[derive(Debug, Args)]
struct ThresholdFlags {
    /// Minimum pitch rise in percent for both angry and panicked
    #[arg(long, value_name = "PCT")]
    pitch_up_pct: Option<f64>,
    /// Minimum level rise in dB for angry
    #[arg(long, value_name = "DB")]
    spl_up_db: Option<f64>,
    /// Maximum (most negative) gap change in percent for angry
    #[arg(long, value_name = "PCT", allow_negative_numbers = true)]
    gap_down_pct: Option<f64>,
    /// Minimum gap rise in percent for panicked
    #[arg(long, value_name = "PCT")]
    gap_up_pct: Option<f64>,
    /// Minimum ascend-time rise in percent for panicked
    #[arg(long, value_name = "PCT")]
    ascend_up_pct: Option<f64>,
    /// Normal-band half-width for pitch, percent
    #[arg(long, value_name = "PCT")]
    normal_band_pitch_pct: Option<f64>,
    /// Normal-band half-width for level, dB
    #[arg(long, value_name = "DB")]
    normal_band_spl_db: Option<f64>,
    /// Normal-band half-width for ascend time, percent
    #[arg(long, value_name = "PCT")]
    normal_band_ascend_pct: Option<f64>,
    /// Normal-band half-width for descend time, percent
    #[arg(long, value_name = "PCT")]
    normal_band_descend_pct: Option<f64>,
    /// Normal-band half-width for gap, percent
    #[arg(long, value_name = "PCT")]
    normal_band_gap_pct: Option<f64>,
}

impl ThresholdFlags {
    fn to_config(&self) -> ThresholdConfig {
        let mut t = ThresholdConfig::default();
        if let Some(v) = self.pitch_up_pct {
            t.pitch_up_pct = v;
        }
        if let Some(v) = self.spl_up_db {
            t.spl_up_db = v;
        }
        if let Some(v) = self.gap_down_pct {
            t.gap_down_pct = v;
        }
        if let Some(v) = self.gap_up_pct {
            t.gap_up_pct = v;
        }
        if let Some(v) = self.ascend_up_pct {
            t.ascend_up_pct = v;
        }
        if let Some(v) = self.normal_band_pitch_pct {
            t.normal_band.pitch_pct = v;
        }
        if let Some(v) = self.normal_band_spl_db {
            t.normal_band.spl_db = v;
        }
        if let Some(v) = self.normal_band_ascend_pct {
            t.normal_band.ascend_pct = v;
        }
        if let Some(v) = self.normal_band_descend_pct {
            t.normal_band.descend_pct = v;
        }
        if let Some(v) = self.normal_band_gap_pct {
            t.normal_band.gap_pct = v;
        }
        t
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Calibrate { inputs, out, analysis } => {
            cmd_calibrate(&inputs, &out, &analysis.to_config())
        }
        Command::Analyze { input, baseline, format, analysis, thresholds } => {
            cmd_analyze(&input, &baseline, format, &analysis.to_config(), &thresholds.to_config())
        }
        Command::Features { input, format, analysis } => {
            cmd_features(&input, format, &analysis.to_config())
        }
        Command::Synth { spec, out, analysis } => cmd_synth(&spec, &out, &analysis.to_config()),
    }
}

fn read_audio(path: &Path) -> Result<emovox_core::AudioBuffer, CliError> {
    wav::read_wav(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_profile(path: &Path) -> Result<BaselineProfile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: cannot read profile: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed profile: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("document serializes");
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("{}: cannot write file: {e}", path.display())))
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("document serializes"));
}

fn cmd_calibrate(inputs: &[PathBuf], out: &Path, config: &AnalysisConfig) -> Result<(), CliError> {
    let mut vectors = Vec::with_capacity(inputs.len());
    for path in inputs {
        let buffer = read_audio(path)?;
        let features =
            extract_features(&buffer, config).map_err(|e| with_path(path, core_err(e)))?;
        vectors.push(features);
    }
    let profile = calibrate(&vectors).map_err(core_err)?;
    write_json(out, &report::round_profile(&profile))
}

fn cmd_analyze(
    input: &Path,
    baseline: &Path,
    format: Format,
    config: &AnalysisConfig,
    thresholds: &ThresholdConfig,
) -> Result<(), CliError> {
    thresholds.validate().map_err(core_err)?;
    let profile = read_profile(baseline)?;
    let buffer = read_audio(input)?;
    let features = extract_features(&buffer, config).map_err(|e| with_path(input, core_err(e)))?;
    let deviations =
        compute_deviation(&features, &profile).map_err(|e| with_path(baseline, core_err(e)))?;
    let emotion = classify(&deviations, thresholds);
    let document =
        ReportDocument::new(&input.display().to_string(), &features, &profile, &emotion, config);
    match format {
        Format::Json => print_json(&document),
        Format::Csv => print!("{}", document.to_csv()),
    }
    Ok(())
}

fn cmd_features(input: &Path, format: Format, config: &AnalysisConfig) -> Result<(), CliError> {
    let buffer = read_audio(input)?;
    let features = extract_features(&buffer, config).map_err(|e| with_path(input, core_err(e)))?;
    let rounded = report::round_features(&features);
    match format {
        Format::Json => print_json(&rounded),
        Format::Csv => print!("{}", report::features_csv(&rounded)),
    }
    Ok(())
}

fn cmd_synth(spec_path: &Path, out: &Path, config: &AnalysisConfig) -> Result<(), CliError> {
    let text = fs::read_to_string(spec_path)
        .map_err(|e| CliError::Usage(format!("{}: cannot read spec: {e}", spec_path.display())))?;
    let spec: UtteranceSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: malformed spec: {e}", spec_path.display())))?;
    let buffer = synth_utterance(&spec).map_err(core_err)?;
    config.validate(spec.sample_rate).map_err(core_err)?;
    wav::write_wav(out, &buffer)
        .map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
    print_json(&report::round_expected(&expected_features(&spec, config)));
    Ok(())
}
