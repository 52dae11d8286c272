//! End-to-end tests of the `emovox` binary: exit codes, document
//! formats, and the synth -> calibrate -> analyze pipeline.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emovox"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

/// Builds a 16-bit PCM WAV, duplicating each sample across `channels`.
fn wav16(sample_rate: u32, channels: u16, samples: &[i16]) -> Vec<u8> {
    let block = 2 * channels as u32;
    let data_len = samples.len() as u32 * block;
    let mut out = Vec::new();
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&channels.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * block).to_le_bytes());
    out.extend_from_slice(&(block as u16).to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in samples {
        for _ in 0..channels {
            out.extend_from_slice(&s.to_le_bytes());
        }
    }
    out
}

fn word(f0: f64, amplitude: f64, gap: f64) -> Value {
    json!({
        "f0_hz": f0,
        "amplitude": amplitude,
        "attack_s": 0.1,
        "sustain_s": 0.3,
        "decay_s": 0.1,
        "gap_after_s": gap,
    })
}

fn spec_json(f0: f64, amplitude: f64, gap: f64) -> String {
    json!({
        "sample_rate": 16000,
        "lead_silence_s": 0.2,
        "trail_silence_s": 0.2,
        "words": [word(f0, amplitude, gap), word(f0, amplitude, gap), word(f0, amplitude, gap)],
    })
    .to_string()
}

/// Renders a fixture WAV into `dir` and returns the synth stdout.
fn synth_fixture(dir: &Path, name: &str, spec: &str) -> String {
    let spec_path = format!("{name}.json");
    fs::write(dir.join(&spec_path), spec).unwrap();
    let wav_path = format!("{name}.wav");
    let out = run_in(dir, &["synth", "--spec", &spec_path, "--out", &wav_path]);
    assert_eq!(exit_code(&out), 0, "synth failed: {}", stderr_str(&out));
    stdout_str(&out)
}

#[test]
fn calibrate_two_recordings_yields_a_two_sample_profile() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    synth_fixture(dir.path(), "b", &spec_json(410.0, 0.28, 0.24));
    let out = run_in(dir.path(), &["calibrate", "a.wav", "b.wav", "--out", "profile.json"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_str(&out));
    assert!(stdout_str(&out).is_empty(), "calibrate must not write to stdout");
    let profile: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("profile.json")).unwrap())
            .unwrap();
    assert_eq!(profile["n_samples"], json!(2));
    for field in ["pitch_hz", "spl_db", "ascend_s", "descend_s", "gap_s"] {
        assert!(profile["mean"][field].is_f64(), "mean.{field} absent");
        assert!(profile["std"][field].is_f64(), "std.{field} absent");
    }
}

#[test]
fn calibrate_single_recording_has_zero_std() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    let out = run_in(dir.path(), &["calibrate", "a.wav", "--out", "profile.json"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_str(&out));
    let profile: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("profile.json")).unwrap())
            .unwrap();
    assert_eq!(profile["n_samples"], json!(1));
    for field in ["pitch_hz", "spl_db", "ascend_s", "descend_s", "gap_s"] {
        assert_eq!(profile["std"][field], json!(0.0), "std.{field}");
    }
}

#[test]
fn calibrate_silent_input_exits_2_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("silent.wav"), wav16(8000, 1, &[0i16; 8000])).unwrap();
    let out = run_in(dir.path(), &["calibrate", "silent.wav", "--out", "profile.json"]);
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr_str(&out).contains("no speech segments detected"),
        "stderr: {}",
        stderr_str(&out)
    );
    assert!(!dir.path().join("profile.json").exists());
}

#[test]
fn calibrate_unreadable_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["calibrate", "missing.wav", "--out", "profile.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn analyze_missing_profile_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    let out = run_in(dir.path(), &["analyze", "a.wav", "--baseline", "missing.json"]);
    assert_eq!(exit_code(&out), 1, "{}", stderr_str(&out));
}

#[test]
fn analyze_calibration_recording_is_normal_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    let out = run_in(dir.path(), &["calibrate", "a.wav", "--out", "profile.json"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_str(&out));

    let first = run_in(dir.path(), &["analyze", "a.wav", "--baseline", "profile.json"]);
    assert_eq!(exit_code(&first), 0, "{}", stderr_str(&first));
    let second = run_in(dir.path(), &["analyze", "a.wav", "--baseline", "profile.json"]);
    assert_eq!(first.stdout, second.stdout, "stdout must be byte-identical across runs");

    let report: Value = serde_json::from_str(&stdout_str(&first)).unwrap();
    assert_eq!(report["label"], json!("normal"));
    assert!(report["confidence"].as_f64().unwrap() > 0.9);
    let profile: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("profile.json")).unwrap())
            .unwrap();
    assert_eq!(report["baseline"], profile, "report embeds the profile losslessly");
    assert_eq!(
        report["fired_rules"].as_array().unwrap().len(),
        5,
        "normal verdict lists all five band conditions"
    );
}

#[test]
fn analyze_csv_is_one_header_and_one_row() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    run_in(dir.path(), &["calibrate", "a.wav", "--out", "profile.json"]);
    let out = run_in(
        dir.path(),
        &["analyze", "a.wav", "--baseline", "profile.json", "--format", "csv"],
    );
    assert_eq!(exit_code(&out), 0, "{}", stderr_str(&out));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "pitch_hz,spl_db,ascend_s,descend_s,gap_s,label,confidence");
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells.len(), 7);
    assert_eq!(cells[5], "normal");
    for cell in &cells[..5] {
        cell.parse::<f64>().expect("numeric feature cell");
    }
    cells[6].parse::<f64>().expect("numeric confidence cell");
}

#[test]
fn analyze_degenerate_baseline_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    let profile = json!({
        "mean": {"pitch_hz": 400.0, "spl_db": -10.0, "ascend_s": 0.08, "descend_s": 0.08, "gap_s": 0.0},
        "std": {"pitch_hz": 0.0, "spl_db": 0.0, "ascend_s": 0.0, "descend_s": 0.0, "gap_s": 0.0},
        "n_samples": 1,
    });
    fs::write(dir.path().join("profile.json"), profile.to_string()).unwrap();
    let out = run_in(dir.path(), &["analyze", "a.wav", "--baseline", "profile.json"]);
    assert_eq!(exit_code(&out), 2, "{}", stderr_str(&out));
}

#[test]
fn analyze_malformed_profile_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    fs::write(dir.path().join("profile.json"), "{\"mean\": 3}").unwrap();
    let out = run_in(dir.path(), &["analyze", "a.wav", "--baseline", "profile.json"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn analyze_invalid_threshold_flags_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    run_in(dir.path(), &["calibrate", "a.wav", "--out", "profile.json"]);
    let out = run_in(
        dir.path(),
        &["analyze", "a.wav", "--baseline", "profile.json", "--pitch-up-pct", "2"],
    );
    assert_eq!(exit_code(&out), 1, "threshold inside the normal band must be rejected");
}

#[test]
fn features_match_the_synth_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let oracle = synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    let oracle: Value = serde_json::from_str(&oracle).unwrap();
    let out = run_in(dir.path(), &["features", "a.wav"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_str(&out));
    let measured: Value = serde_json::from_str(&stdout_str(&out)).unwrap();

    let expected = &oracle["features"];
    let tol = &oracle["tolerances"];
    let pitch = measured["pitch_hz"].as_f64().unwrap();
    let pitch_expected = expected["pitch_hz"].as_f64().unwrap();
    assert!(
        (pitch - pitch_expected).abs()
            <= tol["pitch_rel"].as_f64().unwrap() * pitch_expected,
        "pitch {pitch} vs {pitch_expected}"
    );
    for (field, tol_field) in [
        ("spl_db", "spl_db"),
        ("ascend_s", "ascend_s"),
        ("descend_s", "descend_s"),
        ("gap_s", "gap_s"),
    ] {
        let got = measured[field].as_f64().unwrap();
        let want = expected[field].as_f64().unwrap();
        let t = tol[tol_field].as_f64().unwrap();
        assert!((got - want).abs() <= t, "{field}: {got} vs {want} (tol {t})");
    }
}

#[test]
fn features_silent_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("silent.wav"), wav16(8000, 1, &[0i16; 8000])).unwrap();
    let out = run_in(dir.path(), &["features", "silent.wav"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_str(&out).contains("no speech segments detected"));
}

#[test]
fn features_stereo_matches_its_mono_downmix() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    let mono_bytes = fs::read(dir.path().join("a.wav")).unwrap();
    let samples: Vec<i16> = mono_bytes[44..]
        .chunks_exact(2)
        .map(|b| i16::from_le_bytes([b[0], b[1]]))
        .collect();
    fs::write(dir.path().join("stereo.wav"), wav16(16000, 2, &samples)).unwrap();

    let mono = run_in(dir.path(), &["features", "a.wav"]);
    let stereo = run_in(dir.path(), &["features", "stereo.wav"]);
    assert_eq!(exit_code(&mono), 0);
    assert_eq!(exit_code(&stereo), 0);
    assert_eq!(mono.stdout, stereo.stdout);
}

#[test]
fn features_csv_has_exact_header() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    let out = run_in(dir.path(), &["features", "a.wav", "--format", "csv"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "pitch_hz,spl_db,ascend_s,descend_s,gap_s");
    assert_eq!(lines[1].split(',').count(), 5);
}

#[test]
fn features_invalid_config_flag_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    let out = run_in(dir.path(), &["features", "a.wav", "--frame-len-s", "0"]);
    assert_eq!(exit_code(&out), 1);
    let out = run_in(dir.path(), &["features", "a.wav", "--frame-len-s", "abc"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn features_non_wav_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("not.wav"), b"plain text, not audio").unwrap();
    let out = run_in(dir.path(), &["features", "not.wav"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn synth_writes_wav_and_prints_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let printed = synth_fixture(dir.path(), "a", &spec_json(440.0, 0.5, 0.12));
    assert!(dir.path().join("a.wav").exists());
    let oracle: Value = serde_json::from_str(&printed).unwrap();
    assert_eq!(oracle["features"]["pitch_hz"], json!(440.0));
    assert_eq!(oracle["features"]["gap_s"], json!(0.12));
    assert!(oracle["tolerances"]["spl_db"].is_f64());
}

#[test]
fn synth_empty_word_list_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let spec = json!({"sample_rate": 16000, "words": []}).to_string();
    fs::write(dir.path().join("spec.json"), spec).unwrap();
    let out = run_in(dir.path(), &["synth", "--spec", "spec.json", "--out", "a.wav"]);
    assert_eq!(exit_code(&out), 1);
    assert!(!dir.path().join("a.wav").exists());
}

#[test]
fn synth_malformed_json_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("spec.json"), "{not json").unwrap();
    let out = run_in(dir.path(), &["synth", "--spec", "spec.json", "--out", "a.wav"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn synth_defaults_lead_and_trail_silence() {
    let dir = tempfile::tempdir().unwrap();
    // 0.2 s lead + (0 + 0.3 + 0) word + 0.2 s trail at 8000 Hz.
    let spec = json!({
        "sample_rate": 8000,
        "words": [{"f0_hz": 440.0, "amplitude": 0.5, "attack_s": 0.0,
                    "sustain_s": 0.3, "decay_s": 0.0, "gap_after_s": 0.0}],
    })
    .to_string();
    fs::write(dir.path().join("spec.json"), spec).unwrap();
    let out = run_in(dir.path(), &["synth", "--spec", "spec.json", "--out", "a.wav"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr_str(&out));
    let bytes = fs::read(dir.path().join("a.wav")).unwrap();
    assert_eq!((bytes.len() - 44) / 2, 5600);
}

#[test]
fn profile_file_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    synth_fixture(dir.path(), "a", &spec_json(400.0, 0.3, 0.25));
    run_in(dir.path(), &["calibrate", "a.wav", "--out", "profile.json"]);
    let text = fs::read_to_string(dir.path().join("profile.json")).unwrap();
    let parsed: emovox_core::BaselineProfile = serde_json::from_str(&text).unwrap();
    let mut reprinted = serde_json::to_string_pretty(&parsed).unwrap();
    reprinted.push('\n');
    assert_eq!(text, reprinted);
}

#[test]
fn version_and_help_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["--version"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout_str(&out).starts_with("emovox "));
    let out = run_in(dir.path(), &["--help"]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn unknown_subcommand_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["bogus"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout_str(&out).is_empty());
}
