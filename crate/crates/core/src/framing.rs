//! Overlapping analysis frames and weighted overlap-add reconstruction.
//!
//! Frame `k` covers samples `k * hop .. k * hop + frame_len` of the input,
//! zero padded past the end. Reconstruction applies the same window again
//! and divides each output sample by the sum of squared window values that
//! covered it, so the analysis/synthesis pair is an identity for any window
//! that is nonzero wherever the frames overlap.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal_io::SignalBuffer;

/// Smallest accepted overlap-add normalization at any output sample.
pub const MIN_NORMALIZATION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    Rectangular,
    /// `sin^2(pi (n + 1/2) / N)`: the Hann window sampled at half-sample
    /// offsets. It is strictly positive on the frame and its shifts by
    /// `N / 2` sum to exactly one.
    Hann,
}

impl Window {
    pub fn coefficients(self, len: usize) -> Vec<f64> {
        match self {
            Window::Rectangular => vec![1.0; len],
            Window::Hann => (0..len)
                .map(|n| {
                    let s = (PI * (n as f64 + 0.5) / len as f64).sin();
                    s * s
                })
                .collect(),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Window::Rectangular => "rectangular",
            Window::Hann => "hann",
        })
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rectangular" | "rect" => Ok(Window::Rectangular),
            "hann" => Ok(Window::Hann),
            other => Err(Error::InvalidConfig(format!("unknown window '{other}'"))),
        }
    }
}

/// Windowed frames of one signal together with the parameters needed to put
/// them back together.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSet {
    frames: Vec<Vec<f64>>,
    frame_len: usize,
    hop: usize,
    window: Window,
    original_len: usize,
    sample_rate_hz: u32,
}

/// `ceil(max(len - frame_len, 0) / hop) + 1`
pub fn frame_count(original_len: usize, frame_len: usize, hop: usize) -> usize {
    original_len.saturating_sub(frame_len).div_ceil(hop) + 1
}

pub fn check_framing(frame_len: usize, hop: usize) -> Result<()> {
    if !frame_len.is_power_of_two() {
        return Err(Error::InvalidFraming(format!(
            "frame length {frame_len} is not a power of two"
        )));
    }
    if hop == 0 || hop > frame_len || !frame_len.is_multiple_of(hop) {
        return Err(Error::InvalidFraming(format!(
            "hop {hop} does not divide frame length {frame_len}"
        )));
    }
    Ok(())
}

impl FrameSet {
    pub fn frames(&self) -> &[Vec<f64>] {
        &self.frames
    }

    /// Mutable access to frame contents. Frame lengths are fixed.
    pub fn frames_mut(&mut self) -> impl Iterator<Item = &mut [f64]> {
        self.frames.iter_mut().map(Vec::as_mut_slice)
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn hop(&self) -> usize {
        self.hop
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    /// Replaces the frame contents while keeping the framing parameters.
    pub fn with_frames(&self, frames: Vec<Vec<f64>>) -> Result<FrameSet> {
        if frames.len() != self.frames.len() {
            return Err(Error::InvalidFraming(format!(
                "expected {} frames, got {}",
                self.frames.len(),
                frames.len()
            )));
        }
        if let Some(bad) = frames.iter().find(|f| f.len() != self.frame_len) {
            return Err(Error::InvalidFraming(format!(
                "frame of length {} in a set of length {}",
                bad.len(),
                self.frame_len
            )));
        }
        Ok(FrameSet {
            frames,
            ..self.clone()
        })
    }
}

pub fn make_frames(
    signal: &SignalBuffer,
    frame_len: usize,
    hop: usize,
    window: Window,
) -> Result<FrameSet> {
    check_framing(frame_len, hop)?;
    let x = signal.samples();
    let w = window.coefficients(frame_len);
    let count = frame_count(x.len(), frame_len, hop);
    let frames = (0..count)
        .map(|k| {
            let start = k * hop;
            (0..frame_len)
                .map(|n| x.get(start + n).map_or(0.0, |s| w[n] * s))
                .collect()
        })
        .collect();
    Ok(FrameSet {
        frames,
        frame_len,
        hop,
        window,
        original_len: x.len(),
        sample_rate_hz: signal.sample_rate_hz(),
    })
}

pub fn overlap_add(frames: &FrameSet) -> Result<SignalBuffer> {
    let FrameSet {
        frame_len,
        hop,
        window,
        original_len,
        ..
    } = *frames;
    check_framing(frame_len, hop)?;
    if frames.frames.len() != frame_count(original_len, frame_len, hop) {
        return Err(Error::InvalidFraming(format!(
            "{} frames cannot cover {original_len} samples",
            frames.frames.len()
        )));
    }
    let w = window.coefficients(frame_len);
    let span = (frames.frames.len() - 1) * hop + frame_len;
    let mut acc = vec![0.0; span];
    let mut norm = vec![0.0; span];
    for (k, frame) in frames.frames.iter().enumerate() {
        if frame.len() != frame_len {
            return Err(Error::InvalidFraming(format!(
                "frame {k} has length {}, expected {frame_len}",
                frame.len()
            )));
        }
        let start = k * hop;
        for n in 0..frame_len {
            acc[start + n] += w[n] * frame[n];
            norm[start + n] += w[n] * w[n];
        }
    }
    acc.truncate(original_len);
    normalize(&mut acc, &norm)?;
    SignalBuffer::new(acc, frames.sample_rate_hz)
}

fn normalize(acc: &mut [f64], norm: &[f64]) -> Result<()> {
    for (i, (a, d)) in acc.iter_mut().zip(norm).enumerate() {
        if *d < MIN_NORMALIZATION {
            return Err(Error::NonCola {
                sample: i,
                value: *d,
            });
        }
        *a /= d;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn buf(x: Vec<f64>) -> SignalBuffer {
        SignalBuffer::new(x, 8000).unwrap()
    }

    fn ramp(n: usize) -> SignalBuffer {
        buf((0..n).map(|i| (i as f64 * 0.37).sin() + 0.1 * i as f64).collect())
    }

    #[test]
    fn frame_count_formula() {
        let fs = make_frames(&ramp(8), 4, 2, Window::Rectangular).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(frame_count(0, 4, 2), 1);
        assert_eq!(frame_count(3, 4, 2), 1);
        assert_eq!(frame_count(9, 4, 2), 4);
        assert_eq!(frame_count(1000, 512, 256), 3);
    }

    #[test]
    fn rectangular_frames_are_slices() {
        let x = ramp(10);
        let fs = make_frames(&x, 4, 2, Window::Rectangular).unwrap();
        assert_eq!(fs.len(), 4);
        for (k, f) in fs.frames().iter().enumerate() {
            for (n, v) in f.iter().enumerate() {
                let expect = x.samples().get(2 * k + n).copied().unwrap_or(0.0);
                assert_eq!(*v, expect);
            }
        }
    }

    #[test]
    fn hann_frame_of_constant_is_window() {
        let x = buf(vec![1.0; 16]);
        let fs = make_frames(&x, 8, 4, Window::Hann).unwrap();
        assert_eq!(fs.frames()[0], Window::Hann.coefficients(8));
        assert_eq!(fs.frames()[1], Window::Hann.coefficients(8));
    }

    #[test]
    fn hann_shifts_sum_to_one() {
        let w = Window::Hann.coefficients(512);
        for n in 0..256 {
            assert!((w[n] + w[n + 256] - 1.0).abs() < 1e-15);
        }
        assert!(w.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn hann_constant_signal_reconstructs() {
        let x = buf(vec![1.0; 2048]);
        let y = overlap_add(&make_frames(&x, 512, 256, Window::Hann).unwrap()).unwrap();
        assert_eq!(y.len(), 2048);
        assert!(y.samples().iter().all(|v| (v - 1.0).abs() < 1e-10));
    }

    #[test]
    fn single_frame_copy() {
        let x = ramp(8);
        let y = overlap_add(&make_frames(&x, 8, 8, Window::Rectangular).unwrap()).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn invalid_parameters() {
        let x = ramp(8);
        assert!(matches!(
            make_frames(&x, 6, 3, Window::Hann),
            Err(Error::InvalidFraming(_))
        ));
        assert!(matches!(
            make_frames(&x, 8, 3, Window::Hann),
            Err(Error::InvalidFraming(_))
        ));
        assert!(make_frames(&x, 8, 0, Window::Hann).is_err());
        assert!(make_frames(&x, 8, 16, Window::Hann).is_err());
    }

    #[test]
    fn zero_normalization_is_reported() {
        let mut acc = vec![1.0, 2.0, 3.0];
        let err = normalize(&mut acc, &[1.0, 1e-13, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NonCola { sample: 1, .. }));
        let mut acc = vec![1.0, 2.0];
        normalize(&mut acc, &[0.5, 2.0]).unwrap();
        assert_eq!(acc, vec![2.0, 1.0]);
    }

    #[test]
    fn with_frames_checks_shape() {
        let fs = make_frames(&ramp(8), 4, 2, Window::Hann).unwrap();
        assert!(fs.with_frames(vec![vec![0.0; 4]; 2]).is_err());
        assert!(fs.with_frames(vec![vec![0.0; 3]; 3]).is_err());
        let z = fs.with_frames(vec![vec![0.0; 4]; 3]).unwrap();
        assert!(overlap_add(&z).unwrap().samples().iter().all(|&v| v == 0.0));
    }

    proptest! {
        #[test]
        fn roundtrip_identity(
            xs in proptest::collection::vec(-1.0f64..1.0, 1..700),
            hann in any::<bool>(),
            log_len in 2u32..8,
        ) {
            let window = if hann { Window::Hann } else { Window::Rectangular };
            let frame_len = 1usize << log_len;
            let x = buf(xs);
            let y = overlap_add(&make_frames(&x, frame_len, frame_len / 2, window).unwrap()).unwrap();
            prop_assert_eq!(y.len(), x.len());
            for (a, b) in x.samples().iter().zip(y.samples()) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn overlap_add_is_linear(
            xs in proptest::collection::vec(-1.0f64..1.0, 64..300),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
        ) {
            let x = buf(xs.clone());
            let ys: Vec<f64> = xs.iter().rev().map(|v| v * 0.5 + 0.1).collect();
            let y = buf(ys);
            let fx = make_frames(&x, 32, 16, Window::Hann).unwrap();
            let fy = make_frames(&y, 32, 16, Window::Hann).unwrap();
            let combined: Vec<Vec<f64>> = fx
                .frames()
                .iter()
                .zip(fy.frames())
                .map(|(f, g)| f.iter().zip(g).map(|(u, v)| a * u + b * v).collect())
                .collect();
            let lhs = overlap_add(&fx.with_frames(combined).unwrap()).unwrap();
            let ox = overlap_add(&fx).unwrap();
            let oy = overlap_add(&fy).unwrap();
            for i in 0..lhs.len() {
                let rhs = a * ox.samples()[i] + b * oy.samples()[i];
                prop_assert!((lhs.samples()[i] - rhs).abs() < 1e-10);
            }
        }
    }
}
