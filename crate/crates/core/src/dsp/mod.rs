//! Frame-wise acoustic analysis: MFCC, F0, delta coefficients, and the
//! per-utterance feature cache.

pub mod cache;
pub mod delta;
pub mod mfcc;
pub mod pitch;

pub use cache::{read_frame_cache, write_frame_cache};
pub use delta::compute_deltas;
pub use mfcc::compute_mfcc;
pub use pitch::estimate_f0;

use crate::audio::AudioClip;
use crate::error::Result;

/// Analysis parameters shared by the whole pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSpec {
    pub window_ms: f64,
    pub hop_ms: f64,
    pub preemphasis: f64,
    pub mel_filters: usize,
    pub cepstral_coeffs: usize,
    pub log_floor: f64,
}

impl Default for FrameSpec {
    fn default() -> Self {
        FrameSpec {
            window_ms: 25.0,
            hop_ms: 10.0,
            preemphasis: 0.97,
            mel_filters: 26,
            cepstral_coeffs: 13,
            log_floor: 1e-10,
        }
    }
}

impl FrameSpec {
    pub fn window_samples(&self, sample_rate: u32) -> usize {
        (self.window_ms * sample_rate as f64 / 1000.0).round() as usize
    }

    pub fn hop_samples(&self, sample_rate: u32) -> usize {
        (self.hop_ms * sample_rate as f64 / 1000.0).round() as usize
    }

    pub fn fft_size(&self, sample_rate: u32) -> usize {
        self.window_samples(sample_rate).next_power_of_two()
    }

    /// floor((N - W) / H) + 1.
    pub fn frame_count(&self, samples: usize, sample_rate: u32) -> Option<usize> {
        let w = self.window_samples(sample_rate);
        let h = self.hop_samples(sample_rate);
        if samples < w {
            None
        } else {
            Some((samples - w) / h + 1)
        }
    }

    /// Frame-center time in seconds.
    pub fn frame_center(&self, frame: usize, sample_rate: u32) -> f64 {
        let w = self.window_samples(sample_rate);
        let h = self.hop_samples(sample_rate);
        (frame * h) as f64 / sample_rate as f64 + w as f64 / (2.0 * sample_rate as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct F0Spec {
    pub min_hz: f64,
    pub max_hz: f64,
    pub voicing_threshold: f64,
    pub window_ms: f64,
}

impl Default for F0Spec {
    fn default() -> Self {
        F0Spec {
            min_hz: 60.0,
            max_hz: 400.0,
            voicing_threshold: 0.30,
            window_ms: 40.0,
        }
    }
}

/// Per-utterance frame features on a common frame grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFeatures {
    pub times: Vec<f64>,
    /// frame_count x cepstral_coeffs.
    pub mfcc: Vec<Vec<f64>>,
    /// Hz; 0.0 marks an unvoiced frame.
    pub f0: Vec<f64>,
    /// Autocorrelation peak in [0, 1].
    pub voicing: Vec<f64>,
}

impl FrameFeatures {
    pub fn frame_count(&self) -> usize {
        self.times.len()
    }
}

/// MFCC and F0 on the shared frame grid.
pub fn extract_frame_features(
    clip: &AudioClip,
    spec: &FrameSpec,
    f0spec: &F0Spec,
) -> Result<FrameFeatures> {
    let (times, mfcc) = compute_mfcc(clip, spec)?;
    let tracks = estimate_f0(clip, spec, f0spec)?;
    debug_assert_eq!(times.len(), tracks.len());
    let f0 = tracks.iter().map(|t| t.0).collect();
    let voicing = tracks.iter().map(|t| t.1).collect();
    Ok(FrameFeatures {
        times,
        mfcc,
        f0,
        voicing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_count_formula() {
        let spec = FrameSpec::default();
        // 25 ms / 10 ms at 16 kHz: W=400, H=160.
        assert_eq!(spec.frame_count(400, 16000), Some(1));
        assert_eq!(spec.frame_count(399, 16000), None);
        assert_eq!(spec.frame_count(560, 16000), Some(2));
        assert_eq!(spec.frame_count(16000, 16000), Some(98));
    }

    #[test]
    fn fft_size_is_next_power_of_two() {
        let spec = FrameSpec::default();
        assert_eq!(spec.fft_size(16000), 512);
        assert_eq!(spec.fft_size(8000), 256);
    }
}
