use std::f64::consts::TAU;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::SignalBuffer;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynthKind {
    Sine { freq_hz: f64, amplitude: f64 },
    WhiteNoise { std_dev: f64, seed: u64 },
}

/// Seeded standard-normal generator.
///
/// ChaCha20 seeded through `seed_from_u64`, 53-bit uniforms taken from the
/// top bits of each `u64`, and the basic Box-Muller transform emitting both
/// values of each pair. Every step is fixed, so a seed names the same
/// sequence on every platform with IEEE-754 doubles.
pub struct GaussianSource {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

pub fn synth_signal(kind: SynthKind, duration_s: f64, sample_rate_hz: u32) -> Result<SignalBuffer> {
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(Error::InvalidSignal(format!(
            "duration must be positive, got {duration_s}"
        )));
    }
    if sample_rate_hz == 0 {
        return Err(Error::InvalidSignal("sample rate must be positive".into()));
    }
    let n = (duration_s * f64::from(sample_rate_hz)).round() as usize;
    let fs = f64::from(sample_rate_hz);
    let samples = match kind {
        SynthKind::Sine { freq_hz, amplitude } => (0..n)
            .map(|i| amplitude * (TAU * freq_hz * i as f64 / fs).sin())
            .collect(),
        SynthKind::WhiteNoise { std_dev, seed } => {
            if !(std_dev.is_finite() && std_dev >= 0.0) {
                return Err(Error::InvalidSignal(format!("invalid noise std {std_dev}")));
            }
            let mut source = GaussianSource::new(seed);
            (0..n).map(|_| std_dev * source.next_gaussian()).collect()
        }
    };
    SignalBuffer::new(samples, sample_rate_hz)
}
