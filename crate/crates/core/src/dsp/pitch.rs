//! F0 estimation by normalized autocorrelation with parabolic peak
//! interpolation.
//!
//! Frames share the MFCC grid; each uses its own (wider) analysis window
//! centered on the frame center. Among near-equal correlation peaks the
//! smallest lag wins, which avoids octave errors on strongly periodic
//! signals.

use crate::audio::AudioClip;
use crate::dsp::{F0Spec, FrameSpec};
use crate::error::{Error, Result};

const PEAK_SLACK: f64 = 0.01;

/// Per-frame (f0 Hz, voicing peak); f0 is 0.0 where unvoiced.
pub fn estimate_f0(
    clip: &AudioClip,
    spec: &FrameSpec,
    f0spec: &F0Spec,
) -> Result<Vec<(f64, f64)>> {
    let sr = clip.sample_rate as f64;
    if !(f0spec.min_hz < f0spec.max_hz && f0spec.max_hz < sr / 2.0) {
        return Err(Error::InvalidF0Band);
    }
    let n = clip.samples.len();
    let frames = spec
        .frame_count(n, clip.sample_rate)
        .ok_or(Error::ClipTooShort {
            samples: n,
            window: spec.window_samples(clip.sample_rate),
        })?;

    let window = (f0spec.window_ms * sr / 1000.0).round() as usize;
    let lag_min = (sr / f0spec.max_hz).floor().max(2.0) as usize;
    let lag_max = (sr / f0spec.min_hz).ceil() as usize;

    let mut out = Vec::with_capacity(frames);
    for t in 0..frames {
        let center = (spec.frame_center(t, clip.sample_rate) * sr).round() as usize;
        let start = center.saturating_sub(window / 2);
        let end = (start + window).min(n);
        let frame = &clip.samples[start..end];
        out.push(frame_f0(frame, sr, lag_min, lag_max, f0spec));
    }
    Ok(out)
}

fn frame_f0(frame: &[f32], sr: f64, lag_min: usize, lag_max: usize, f0spec: &F0Spec) -> (f64, f64) {
    let len = frame.len();
    if len < lag_min + 2 {
        return (0.0, 0.0);
    }
    let mean = frame.iter().map(|&s| s as f64).sum::<f64>() / len as f64;
    let x: Vec<f64> = frame.iter().map(|&s| s as f64 - mean).collect();

    let lag_hi = lag_max.min(len - 1);
    let mut corr = vec![0.0f64; lag_hi + 2];
    for (tau, c) in corr.iter_mut().enumerate().take(lag_hi + 1).skip(1) {
        let overlap = len - tau;
        let mut num = 0.0;
        let mut e0 = 0.0;
        let mut e1 = 0.0;
        for i in 0..overlap {
            num += x[i] * x[i + tau];
            e0 += x[i] * x[i];
            e1 += x[i + tau] * x[i + tau];
        }
        let denom = (e0 * e1).sqrt();
        *c = if denom > 1e-12 { num / denom } else { 0.0 };
    }

    // Global maximum over the search band, then the smallest local maximum
    // within slack of it.
    let lo = lag_min;
    let hi = lag_hi.min(lag_max);
    if lo > hi {
        return (0.0, 0.0);
    }
    let mut best = f64::NEG_INFINITY;
    for &c in corr.iter().take(hi + 1).skip(lo) {
        if c > best {
            best = c;
        }
    }
    if best < f0spec.voicing_threshold {
        return (0.0, best.clamp(0.0, 1.0));
    }
    let mut peak_lag = 0usize;
    for tau in lo..=hi {
        let c = corr[tau];
        let left = if tau > 0 { corr[tau - 1] } else { f64::NEG_INFINITY };
        let right = if tau + 1 < corr.len() {
            corr[tau + 1]
        } else {
            f64::NEG_INFINITY
        };
        if c >= left && c >= right && c >= best - PEAK_SLACK {
            peak_lag = tau;
            break;
        }
    }
    if peak_lag == 0 {
        return (0.0, best.clamp(0.0, 1.0));
    }

    // Parabolic interpolation around the integer peak.
    let mut lag = peak_lag as f64;
    if peak_lag > lo && peak_lag < hi {
        let (l, c, r) = (corr[peak_lag - 1], corr[peak_lag], corr[peak_lag + 1]);
        let denom = l - 2.0 * c + r;
        if denom.abs() > 1e-12 {
            let delta = 0.5 * (l - r) / denom;
            if delta.abs() <= 1.0 {
                lag += delta;
            }
        }
    }
    let f0 = (sr / lag).clamp(f0spec.min_hz, f0spec.max_hz);
    (f0, corr[peak_lag].clamp(0.0, 1.0))
}
