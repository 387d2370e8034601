//! Mono PCM audio buffers, WAV file I/O, synthetic test material and SNR
//! metrics.

mod metrics;
mod synth;
mod wav;

pub use metrics::{mix_at_snr, snr_db, SNR_CAP_DB};
pub use synth::{synth_signal, GaussianSource, SynthKind};
pub use wav::{decode_wav, encode_wav, read_wav, write_wav};

use crate::error::{Error, Result};

/// A mono sequence of finite samples together with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBuffer {
    samples: Vec<f64>,
    sample_rate_hz: u32,
}

impl SignalBuffer {
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::InvalidSignal("sample rate must be positive".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidSignal(format!("non-finite sample at index {i}")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn silence(len: usize, sample_rate_hz: u32) -> Result<Self> {
        Self::new(vec![0.0; len], sample_rate_hz)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate_hz)
    }

    /// Sum of squared samples.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum()
    }

    /// Number of samples covering `ms` milliseconds, rounded to nearest.
    pub fn samples_for_ms(&self, ms: f64) -> usize {
        (ms * 1e-3 * f64::from(self.sample_rate_hz)).round() as usize
    }

    pub(crate) fn check_compatible(&self, other: &SignalBuffer) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        if self.sample_rate_hz != other.sample_rate_hz {
            return Err(Error::RateMismatch {
                left: self.sample_rate_hz,
                right: other.sample_rate_hz,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_rate_and_non_finite() {
        assert!(SignalBuffer::new(vec![0.0], 0).is_err());
        assert!(SignalBuffer::new(vec![0.0, f64::NAN], 8000).is_err());
        assert!(SignalBuffer::new(vec![f64::INFINITY], 8000).is_err());
        assert!(SignalBuffer::new(vec![], 8000).is_ok());
    }

    #[test]
    fn ms_to_samples() {
        let s = SignalBuffer::silence(10, 16_000).unwrap();
        assert_eq!(s.samples_for_ms(100.0), 1600);
    }
}
