//! MFCC extraction: pre-emphasis, Hamming window, magnitude FFT, triangular
//! mel filterbank, floored log, orthonormal DCT-II.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::AudioClip;
use crate::dsp::FrameSpec;
use crate::error::{Error, Result};

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular filter weights over FFT magnitude bins 0..=fft_size/2.
/// Filter centers are evenly spaced on the mel scale between 0 Hz and
/// Nyquist.
pub fn mel_filterbank(fft_size: usize, sample_rate: u32, filters: usize) -> Vec<Vec<f64>> {
    let nyquist = sample_rate as f64 / 2.0;
    let mel_max = hz_to_mel(nyquist);
    let points: Vec<f64> = (0..filters + 2)
        .map(|j| mel_to_hz(mel_max * j as f64 / (filters + 1) as f64))
        .collect();
    let bin_count = fft_size / 2 + 1;
    let bin_hz = sample_rate as f64 / fft_size as f64;

    let mut bank = Vec::with_capacity(filters);
    for m in 1..=filters {
        let (lo, mid, hi) = (points[m - 1], points[m], points[m + 1]);
        let mut weights = vec![0.0; bin_count];
        for (k, w) in weights.iter_mut().enumerate() {
            let f = k as f64 * bin_hz;
            if f > lo && f < mid {
                *w = (f - lo) / (mid - lo);
            } else if (f - mid).abs() < 1e-12 {
                *w = 1.0;
            } else if f > mid && f < hi {
                *w = (hi - f) / (hi - mid);
            }
        }
        bank.push(weights);
    }
    bank
}

/// Returns (frame-center times, frame_count x cepstral_coeffs matrix).
pub fn compute_mfcc(clip: &AudioClip, spec: &FrameSpec) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let sr = clip.sample_rate;
    let w = spec.window_samples(sr);
    let h = spec.hop_samples(sr);
    let n = clip.samples.len();
    let frames = spec.frame_count(n, sr).ok_or(Error::ClipTooShort {
        samples: n,
        window: w,
    })?;
    let fft_size = spec.fft_size(sr);

    // Pre-emphasis over the whole signal; the first sample passes through.
    let mut emphasized = Vec::with_capacity(n);
    let mut prev = 0.0f64;
    for &s in &clip.samples {
        let s = s as f64;
        emphasized.push(s - spec.preemphasis * prev);
        prev = s;
    }

    let hamming: Vec<f64> = (0..w)
        .map(|i| 0.54 - 0.46 * (2.0 * std::f64::consts::PI * i as f64 / (w - 1) as f64).cos())
        .collect();
    let bank = mel_filterbank(fft_size, sr, spec.mel_filters);
    let fft = FftPlanner::<f64>::new().plan_fft_forward(fft_size);

    let m = spec.mel_filters as f64;
    let scale0 = (1.0 / m).sqrt();
    let scale = (2.0 / m).sqrt();

    let mut times = Vec::with_capacity(frames);
    let mut coeffs = Vec::with_capacity(frames);
    let mut buf = vec![Complex::new(0.0, 0.0); fft_size];
    for t in 0..frames {
        let start = t * h;
        for (i, b) in buf.iter_mut().enumerate() {
            *b = if i < w {
                Complex::new(emphasized[start + i] * hamming[i], 0.0)
            } else {
                Complex::new(0.0, 0.0)
            };
        }
        fft.process(&mut buf);
        let magnitudes: Vec<f64> = buf[..fft_size / 2 + 1].iter().map(|c| c.norm()).collect();

        let log_energies: Vec<f64> = bank
            .iter()
            .map(|weights| {
                let energy: f64 = weights
                    .iter()
                    .zip(magnitudes.iter())
                    .map(|(w, m)| w * m)
                    .sum();
                energy.max(spec.log_floor).ln()
            })
            .collect();

        let mut row = Vec::with_capacity(spec.cepstral_coeffs);
        for k in 0..spec.cepstral_coeffs {
            let sum: f64 = log_energies
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    e * (std::f64::consts::PI * k as f64 * (2.0 * i as f64 + 1.0) / (2.0 * m))
                        .cos()
                })
                .sum();
            row.push(if k == 0 { scale0 * sum } else { scale * sum });
        }
        times.push(spec.frame_center(t, sr));
        coeffs.push(row);
    }
    Ok((times, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clip(samples: Vec<f32>) -> AudioClip {
        AudioClip {
            samples,
            sample_rate: 16000,
        }
    }

    #[test]
    fn one_window_gives_one_frame() {
        let (times, coeffs) = compute_mfcc(&clip(vec![0.1; 400]), &FrameSpec::default()).unwrap();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs[0].len(), 13);
        assert!((times[0] - 0.0125).abs() < 1e-12);
    }

    #[test]
    fn short_clip_is_an_error() {
        assert!(matches!(
            compute_mfcc(&clip(vec![0.0; 399]), &FrameSpec::default()),
            Err(Error::ClipTooShort { .. })
        ));
    }

    #[test]
    fn all_zero_clip_hits_the_log_floor() {
        let spec = FrameSpec::default();
        let (_, coeffs) = compute_mfcc(&clip(vec![0.0; 800]), &spec).unwrap();
        // All mel energies equal the floor, so the log spectrum is constant:
        // c0 = ln(floor) * sqrt(26), the rest vanish by DCT orthogonality.
        let expected_c0 = spec.log_floor.ln() * (spec.mel_filters as f64).sqrt();
        for row in &coeffs {
            assert!((row[0] - expected_c0).abs() < 1e-9, "c0 {}", row[0]);
            for c in &row[1..] {
                assert!(c.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn scaling_shifts_only_c0() {
        // White-ish deterministic signal, loud enough to stay off the floor.
        let samples: Vec<f32> = (0..1600)
            .map(|i| (((i * 2654435761u64 as usize) % 1000) as f32 / 1000.0 - 0.5) * 0.4)
            .collect();
        let doubled: Vec<f32> = samples.iter().map(|s| s * 2.0).collect();
        let spec = FrameSpec::default();
        let (_, a) = compute_mfcc(&clip(samples), &spec).unwrap();
        let (_, b) = compute_mfcc(&clip(doubled), &spec).unwrap();
        let shift = 2.0f64.ln() * (spec.mel_filters as f64).sqrt();
        for (ra, rb) in a.iter().zip(b.iter()) {
            assert!((rb[0] - ra[0] - shift).abs() < 1e-6);
            for (ca, cb) in ra[1..].iter().zip(rb[1..].iter()) {
                assert!((ca - cb).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn filterbank_covers_all_filters() {
        let bank = mel_filterbank(512, 16000, 26);
        assert_eq!(bank.len(), 26);
        for (i, weights) in bank.iter().enumerate() {
            assert!(
                weights.iter().any(|w| *w > 0.0),
                "filter {i} picks up no bins"
            );
        }
    }
}
