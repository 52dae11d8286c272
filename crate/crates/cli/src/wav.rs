//! Minimal RIFF/WAVE reading and writing.
//!
//! Reads integer PCM (8, 16, 24, 32 bit) and 32-bit float WAV files,
//! downmixing multichannel material to mono by the per-frame channel
//! mean. Writes 16-bit mono PCM. Unknown chunks are skipped.

use std::fs;
use std::path::Path;

use emovox_core::AudioBuffer;

/// Reads a WAV file into an audio buffer.
pub fn read_wav(path: &Path) -> Result<AudioBuffer, String> {
    let bytes = fs::read(path).map_err(|e| format!("cannot read file: {e}"))?;
    parse_wav(&bytes)
}

struct Format {
    code: u16,
    channels: usize,
    sample_rate: u32,
    bits: u16,
}

fn parse_wav(bytes: &[u8]) -> Result<AudioBuffer, String> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err("not a RIFF/WAVE file".into());
    }
    let mut format: Option<Format> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12usize;
    while pos + 8 <= bytes.len() {
        let id: [u8; 4] = bytes[pos..pos + 4].try_into().unwrap();
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        pos += 8;
        if pos + size > bytes.len() {
            return Err("truncated chunk".into());
        }
        let body = &bytes[pos..pos + size];
        match &id {
            b"fmt " => format = Some(parse_format(body)?),
            b"data" => data = Some(body),
            _ => {}
        }
        // Chunks are word aligned; odd sizes carry one pad byte.
        pos += size + (size & 1);
    }
    let format = format.ok_or("missing fmt chunk")?;
    let data = data.ok_or("missing data chunk")?;
    decode(&format, data)
}

fn parse_format(body: &[u8]) -> Result<Format, String> {
    if body.len() < 16 {
        return Err("fmt chunk too short".into());
    }
    let field = |i: usize| u16::from_le_bytes([body[i], body[i + 1]]);
    let format = Format {
        code: field(0),
        channels: field(2) as usize,
        sample_rate: u32::from_le_bytes(body[4..8].try_into().unwrap()),
        bits: field(14),
    };
    if format.channels == 0 {
        return Err("fmt chunk declares zero channels".into());
    }
    Ok(format)
}

fn decode(format: &Format, data: &[u8]) -> Result<AudioBuffer, String> {
    let bytes_per = match (format.code, format.bits) {
        (1, 8) => 1,
        (1, 16) => 2,
        (1, 24) => 3,
        (1, 32) => 4,
        (3, 32) => 4,
        (1, bits) => return Err(format!("unsupported PCM bit depth {bits}")),
        (3, bits) => return Err(format!("unsupported float bit depth {bits}")),
        (code, _) => return Err(format!("unsupported format code {code}")),
    };
    let frame = bytes_per * format.channels;
    if data.len() % frame != 0 {
        return Err("data chunk is not a whole number of frames".into());
    }
    let mut samples = Vec::with_capacity(data.len() / frame);
    for chunk in data.chunks_exact(frame) {
        let sum: f64 = chunk
            .chunks_exact(bytes_per)
            .map(|b| decode_sample(format.code, format.bits, b))
            .sum();
        samples.push((sum / format.channels as f64).clamp(-1.0, 1.0));
    }
    AudioBuffer::new(samples, format.sample_rate).map_err(|e| e.to_string())
}

fn decode_sample(code: u16, bits: u16, b: &[u8]) -> f64 {
    match (code, bits) {
        (1, 8) => (b[0] as f64 - 128.0) / 127.0,
        (1, 16) => i16::from_le_bytes([b[0], b[1]]) as f64 / 32767.0,
        (1, 24) => (i32::from_le_bytes([0, b[0], b[1], b[2]]) >> 8) as f64 / 8388607.0,
        (1, 32) => i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64 / 2147483647.0,
        (3, 32) => {
            let v = f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        }
        _ => unreachable!("rejected in decode"),
    }
}

/// Writes a buffer as 16-bit mono PCM.
pub fn write_wav(path: &Path, buffer: &AudioBuffer) -> Result<(), String> {
    let data_len = (buffer.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + buffer.len() * 2);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&buffer.sample_rate().to_le_bytes());
    out.extend_from_slice(&(buffer.sample_rate() * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in buffer.samples() {
        let v = (s * 32767.0).round().clamp(-32767.0, 32767.0) as i16;
        out.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, out).map_err(|e| format!("cannot write file: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wav_bytes(code: u16, channels: u16, sample_rate: u32, bits: u16, data: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"RIFF");
        out.extend_from_slice(&(36 + data.len() as u32).to_le_bytes());
        out.extend_from_slice(b"WAVE");
        out.extend_from_slice(b"fmt ");
        out.extend_from_slice(&16u32.to_le_bytes());
        out.extend_from_slice(&code.to_le_bytes());
        out.extend_from_slice(&channels.to_le_bytes());
        out.extend_from_slice(&sample_rate.to_le_bytes());
        let block = channels as u32 * bits as u32 / 8;
        out.extend_from_slice(&(sample_rate * block).to_le_bytes());
        out.extend_from_slice(&(block as u16).to_le_bytes());
        out.extend_from_slice(&bits.to_le_bytes());
        out.extend_from_slice(b"data");
        out.extend_from_slice(&(data.len() as u32).to_le_bytes());
        out.extend_from_slice(data);
        out
    }

    #[test]
    fn round_trip_is_within_one_quantization_step() {
        let samples: Vec<f64> =
            (0..800).map(|i| (2.0 * std::f64::consts::PI * 50.0 * i as f64 / 8000.0).sin()).collect();
        let buffer = AudioBuffer::new(samples.clone(), 8000).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.wav");
        write_wav(&path, &buffer).unwrap();
        let back = read_wav(&path).unwrap();
        assert_eq!(back.sample_rate(), 8000);
        assert_eq!(back.len(), 800);
        let tol = 2f64.powi(-15);
        for (a, b) in samples.iter().zip(back.samples()) {
            assert!((a - b).abs() <= tol, "{a} vs {b}");
        }
    }

    #[test]
    fn full_scale_extremes_round_trip() {
        let buffer = AudioBuffer::new(vec![1.0, -1.0, 0.0], 8000).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.wav");
        write_wav(&path, &buffer).unwrap();
        let back = read_wav(&path).unwrap();
        assert_eq!(back.samples(), &[1.0, -1.0, 0.0]);
    }

    #[test]
    fn empty_buffer_round_trips() {
        let buffer = AudioBuffer::new(Vec::new(), 44100).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.wav");
        write_wav(&path, &buffer).unwrap();
        let back = read_wav(&path).unwrap();
        assert!(back.is_empty());
        assert_eq!(back.sample_rate(), 44100);
    }

    #[test]
    fn stereo_downmixes_to_channel_mean() {
        // Frames: (+16384, -16384) -> 0; (32767, 32767) -> 1.0.
        let mut data = Vec::new();
        for v in [16384i16, -16384, 32767, 32767] {
            data.extend_from_slice(&v.to_le_bytes());
        }
        let bytes = wav_bytes(1, 2, 8000, 16, &data);
        let buffer = parse_wav(&bytes).unwrap();
        assert_eq!(buffer.len(), 2);
        assert!(buffer.samples()[0].abs() < 1e-12);
        assert!((buffer.samples()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eight_bit_decodes_around_the_midpoint() {
        let bytes = wav_bytes(1, 1, 8000, 8, &[128, 255, 1, 0]);
        let buffer = parse_wav(&bytes).unwrap();
        let s = buffer.samples();
        assert_eq!(s[0], 0.0);
        assert!((s[1] - 1.0).abs() < 1e-12);
        assert!((s[2] + 1.0).abs() < 1e-12);
        // 0 maps one step past -1 on the asymmetric 8-bit grid; it clamps.
        assert_eq!(s[3], -1.0);
    }

    #[test]
    fn twenty_four_bit_decodes_full_scale() {
        let mut data = Vec::new();
        data.extend_from_slice(&[0xFF, 0xFF, 0x7F]); // +8388607
        data.extend_from_slice(&[0x01, 0x00, 0x80]); // -8388607
        let bytes = wav_bytes(1, 1, 8000, 24, &data);
        let buffer = parse_wav(&bytes).unwrap();
        assert!((buffer.samples()[0] - 1.0).abs() < 1e-12);
        assert!((buffer.samples()[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn float_decodes_and_zeroes_non_finite() {
        let mut data = Vec::new();
        for v in [0.5f32, -0.25, f32::NAN] {
            data.extend_from_slice(&v.to_le_bytes());
        }
        let bytes = wav_bytes(3, 1, 8000, 32, &data);
        let buffer = parse_wav(&bytes).unwrap();
        assert_eq!(buffer.samples(), &[0.5, -0.25, 0.0]);
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(parse_wav(b"not a wav").is_err());
        assert!(parse_wav(&wav_bytes(2, 1, 8000, 16, &[0, 0])).is_err());
        assert!(parse_wav(&wav_bytes(1, 1, 8000, 12, &[0, 0])).is_err());
        // Truncated data chunk.
        let mut bytes = wav_bytes(1, 1, 8000, 16, &[0, 0, 0, 0]);
        bytes.truncate(bytes.len() - 2);
        assert!(parse_wav(&bytes).is_err());
    }
}
