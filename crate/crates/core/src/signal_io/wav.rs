use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use super::SignalBuffer;
use crate::error::{Error, Result};

const RIFF: &[u8; 4] = b"RIFF";
const WAVE: &[u8; 4] = b"WAVE";
const FMT: &[u8; 4] = b"fmt ";
const DATA: &[u8; 4] = b"data";

const FORMAT_PCM: u16 = 1;
const SCALE: f64 = 32768.0;

struct FmtChunk {
    format_tag: u16,
    channels: u16,
    sample_rate: u32,
    bits_per_sample: u16,
}

fn u16_at(bytes: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([bytes[at], bytes[at + 1]])
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([bytes[at], bytes[at + 1], bytes[at + 2], bytes[at + 3]])
}

/// Reads a 16-bit PCM mono WAV file. Samples are scaled by 1/32768.
pub fn read_wav(path: impl AsRef<Path>) -> Result<SignalBuffer> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    decode_wav(&bytes)
}

/// Writes `signal` as a 16-bit PCM mono little-endian WAV file.
pub fn write_wav(path: impl AsRef<Path>, signal: &SignalBuffer) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_wav(signal)).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn decode_wav(bytes: &[u8]) -> Result<SignalBuffer> {
    if bytes.len() < 12 || &bytes[0..4] != RIFF || &bytes[8..12] != WAVE {
        return Err(Error::NotWave("missing RIFF/WAVE signature".into()));
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut offset = 12;
    while offset + 8 <= bytes.len() {
        let id = &bytes[offset..offset + 4];
        let size = u32_at(bytes, offset + 4) as usize;
        let body = offset + 8;
        let available = bytes.len() - body;

        if id == FMT {
            if size < 16 || available < 16 {
                return Err(Error::Truncated("fmt chunk shorter than 16 bytes".into()));
            }
            fmt = Some(FmtChunk {
                format_tag: u16_at(bytes, body),
                channels: u16_at(bytes, body + 2),
                sample_rate: u32_at(bytes, body + 4),
                bits_per_sample: u16_at(bytes, body + 14),
            });
        } else if id == DATA {
            let fmt = fmt
                .as_ref()
                .ok_or_else(|| Error::NotWave("data chunk precedes fmt chunk".into()))?;
            check_format(fmt)?;
            if size > available {
                return Err(Error::Truncated(format!(
                    "data chunk declares {size} bytes, {available} present"
                )));
            }
            if !size.is_multiple_of(2) {
                return Err(Error::Truncated(format!(
                    "data chunk of {size} bytes holds a partial sample"
                )));
            }
            let samples = bytes[body..body + size]
                .chunks_exact(2)
                .map(|b| f64::from(i16::from_le_bytes([b[0], b[1]])) / SCALE)
                .collect();
            return SignalBuffer::new(samples, fmt.sample_rate);
        }

        // chunks are word aligned
        offset = body.saturating_add(size).saturating_add(size & 1);
    }

    match fmt {
        None => Err(Error::NotWave("no fmt chunk".into())),
        Some(fmt) => {
            check_format(&fmt)?;
            Err(Error::Truncated("no data chunk".into()))
        }
    }
}

fn check_format(fmt: &FmtChunk) -> Result<()> {
    if fmt.format_tag != FORMAT_PCM {
        return Err(Error::UnsupportedFormat(format!(
            "format tag {:#06x} is not integer PCM",
            fmt.format_tag
        )));
    }
    if fmt.channels != 1 {
        return Err(Error::MultiChannel(fmt.channels));
    }
    if fmt.bits_per_sample != 16 {
        return Err(Error::UnsupportedFormat(format!(
            "{} bits per sample, expected 16",
            fmt.bits_per_sample
        )));
    }
    if fmt.sample_rate == 0 {
        return Err(Error::UnsupportedFormat("sample rate 0".into()));
    }
    Ok(())
}

/// Clamps to [-1, 1 - 1/32768] and rounds to the nearest 16-bit code.
fn quantize(x: f64) -> i16 {
    (x.clamp(-1.0, 1.0 - 1.0 / SCALE) * SCALE).round() as i16
}

pub fn encode_wav(signal: &SignalBuffer) -> Vec<u8> {
    let data_len = (signal.len() * 2) as u32;
    let rate = signal.sample_rate_hz();
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(RIFF);
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(WAVE);
    out.extend_from_slice(FMT);
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(DATA);
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in signal.samples() {
        out.extend_from_slice(&quantize(s).to_le_bytes());
    }
    out
}
