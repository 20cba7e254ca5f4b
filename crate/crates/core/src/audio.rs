//! WAV ingestion and emission (RIFF PCM 16-bit mono only).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    /// Samples in [-1, 1].
    pub samples: Vec<f32>,
    pub sample_rate: u32,
}

impl AudioClip {
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Exact inverse of the 16-bit scaling in `read_wav` for in-range values.
pub fn sample_to_i16(v: f32) -> i16 {
    let scaled = (v as f64 * 32768.0).round();
    scaled.clamp(-32768.0, 32767.0) as i16
}

pub fn read_wav(bytes: &[u8]) -> Result<AudioClip> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::NotWav);
    }

    let mut pos = 12usize;
    let mut format: Option<(u16, u16, u32, u16)> = None;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_start = pos + 8;
        match id {
            b"fmt " => {
                let body = bytes
                    .get(body_start..body_start + size.min(16))
                    .ok_or(Error::NotWav)?;
                if body.len() < 16 {
                    return Err(Error::UnsupportedWav("fmt chunk too short".into()));
                }
                let audio_format = u16::from_le_bytes(body[0..2].try_into().unwrap());
                let channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
                let sample_rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
                let bits = u16::from_le_bytes(body[14..16].try_into().unwrap());
                format = Some((audio_format, channels, sample_rate, bits));
            }
            b"data" => {
                let available = bytes.len() - body_start;
                if available < size {
                    return Err(Error::TruncatedWav {
                        expected: size,
                        actual: available,
                    });
                }
                data = Some(&bytes[body_start..body_start + size]);
            }
            _ => {}
        }
        // Chunks are word-aligned.
        pos = body_start + size + (size & 1);
    }

    let (audio_format, channels, sample_rate, bits) =
        format.ok_or(Error::UnsupportedWav("missing fmt chunk".into()))?;
    if audio_format != 1 {
        return Err(Error::UnsupportedWav(format!(
            "PCM required (format tag {audio_format})"
        )));
    }
    if channels != 1 {
        return Err(Error::MonoRequired(channels));
    }
    if bits != 16 {
        return Err(Error::UnsupportedWav(format!("16-bit required ({bits})")));
    }
    if sample_rate == 0 {
        return Err(Error::UnsupportedWav("zero sample rate".into()));
    }
    let data = data.ok_or(Error::UnsupportedWav("missing data chunk".into()))?;

    let samples = data
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes([c[0], c[1]]) as f32 / 32768.0)
        .collect();
    Ok(AudioClip {
        samples,
        sample_rate,
    })
}

pub fn write_wav(clip: &AudioClip) -> Vec<u8> {
    let data_len = clip.samples.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&clip.sample_rate.to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in &clip.samples {
        out.extend_from_slice(&sample_to_i16(s).to_le_bytes());
    }
    out
}
