//! Reproducible synthetic experiments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{enhance, EnhanceConfig, Method};
use crate::report::Report;
use crate::signal_io::{mix_at_snr, synth_signal, SignalBuffer, SynthKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    /// 5 s at 16 kHz: 100 ms of silence, then a 440 Hz sine of amplitude
    /// 0.5, mixed with seeded unit white noise at 0 dB.
    #[serde(rename = "sine-0db")]
    Sine0Db,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Sine0Db => f.write_str("sine-0db"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sine-0db" => Ok(Preset::Sine0Db),
            other => Err(Error::InvalidConfig(format!("unknown preset '{other}'"))),
        }
    }
}

pub const PRESET_RATE_HZ: u32 = 16_000;
pub const PRESET_DURATION_S: f64 = 5.0;
pub const PRESET_SILENCE_MS: f64 = 100.0;

/// A sine preceded by `silence_ms` of zeros.
pub fn gated_sine(
    freq_hz: f64,
    amplitude: f64,
    silence_ms: f64,
    duration_s: f64,
    sample_rate_hz: u32,
) -> Result<SignalBuffer> {
    let sine = synth_signal(SynthKind::Sine { freq_hz, amplitude }, duration_s, sample_rate_hz)?;
    let gate = sine.samples_for_ms(silence_ms).min(sine.len());
    let mut samples = sine.into_samples();
    samples[..gate].iter_mut().for_each(|s| *s = 0.0);
    SignalBuffer::new(samples, sample_rate_hz)
}

/// Clean and noisy signals of a preset.
pub fn preset_signals(preset: Preset, seed: u64) -> Result<(SignalBuffer, SignalBuffer)> {
    match preset {
        Preset::Sine0Db => {
            let clean = gated_sine(440.0, 0.5, PRESET_SILENCE_MS, PRESET_DURATION_S, PRESET_RATE_HZ)?;
            let noise = synth_signal(
                SynthKind::WhiteNoise { std_dev: 1.0, seed },
                PRESET_DURATION_S,
                PRESET_RATE_HZ,
            )?;
            let noisy = mix_at_snr(&clean, &noise, 0.0)?;
            Ok((clean, noisy))
        }
    }
}

pub fn preset_config(preset: Preset, seed: u64, method: Method) -> EnhanceConfig {
    match preset {
        Preset::Sine0Db => EnhanceConfig {
            method,
            seed,
            ..EnhanceConfig::default()
        },
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub clean: SignalBuffer,
    pub noisy: SignalBuffer,
    pub enhanced: SignalBuffer,
    pub report: Report,
}

impl ExperimentOutcome {
    pub fn input_snr_db(&self) -> f64 {
        self.report.input_snr_db.expect("preset reference has power")
    }

    pub fn output_snr_db(&self) -> f64 {
        self.report.output_snr_db.expect("preset reference has power")
    }

    pub fn improvement_db(&self) -> f64 {
        self.output_snr_db() - self.input_snr_db()
    }
}

pub fn run_preset(preset: Preset, seed: u64, method: Method) -> Result<ExperimentOutcome> {
    run_with_config(preset, &preset_config(preset, seed, method))
}

/// Runs `preset` with an explicit configuration; the noise seed is taken
/// from `config.seed`.
pub fn run_with_config(preset: Preset, config: &EnhanceConfig) -> Result<ExperimentOutcome> {
    let (clean, noisy) = preset_signals(preset, config.seed)?;
    let (enhanced, report) = enhance(&noisy, config, Some(&clean))?;
    Ok(ExperimentOutcome {
        clean,
        noisy,
        enhanced,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal_io::snr_db;

    #[test]
    fn preset_mixes_at_zero_db() {
        let (clean, noisy) = preset_signals(Preset::Sine0Db, 9).unwrap();
        assert_eq!(clean.len(), 80_000);
        assert!(clean.samples()[..1600].iter().all(|&s| s == 0.0));
        assert!(snr_db(&clean, &noisy).unwrap().abs() < 1e-9);
    }

    #[test]
    fn preset_names() {
        assert_eq!("sine-0db".parse::<Preset>().unwrap(), Preset::Sine0Db);
        assert_eq!(Preset::Sine0Db.to_string(), "sine-0db");
        assert!("pink".parse::<Preset>().is_err());
    }
}
