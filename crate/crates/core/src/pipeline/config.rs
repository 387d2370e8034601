use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framing::{check_framing, Window};
use crate::stats::{bin_count, DEFAULT_EPSILON};
use crate::thresholding::DEFAULT_BAND_TOLERANCE;
use crate::wavelet::{check_decomposition, FilterBank, WaveletName};

/// How each subband's threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Hard rule at `sigma * sqrt(2 ln n)`.
    UniversalHard,
    /// Soft rule at `sigma * sqrt(2 ln n)`.
    UniversalSoft,
    /// Band removal around zero where the frame's coefficient histogram
    /// agrees with the noise histogram.
    Band,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::UniversalHard => "universal-hard",
            Method::UniversalSoft => "universal-soft",
            Method::Band => "band",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "universal-hard" => Ok(Method::UniversalHard),
            "universal-soft" => Ok(Method::UniversalSoft),
            "band" => Ok(Method::Band),
            other => Err(Error::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum NoiseEstimation {
    /// The first `ms` milliseconds are noise only.
    LeadingSilence { ms: f64 },
    /// Robust estimate over every frame of the signal.
    Mad,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VuvConfig {
    pub enabled: bool,
    /// Entropy (nats) below which a frame counts as unvoiced. `None` uses
    /// half the log of the frame histogram's bin count.
    pub entropy_threshold: Option<f64>,
    /// Factor applied to scalar thresholds in unvoiced frames.
    pub unvoiced_scale: f64,
}

impl Default for VuvConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            entropy_threshold: None,
            unvoiced_scale: 0.5,
        }
    }
}

/// Every tunable of the enhancement pipeline. `Default` is the documented
/// configuration table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnhanceConfig {
    pub frame_len: usize,
    pub hop: usize,
    pub window: Window,
    pub wavelet: WaveletName,
    pub depth: usize,
    pub method: Method,
    /// Replaces the universal estimate for the scalar methods when set.
    pub fixed_threshold: Option<f64>,
    pub vuv: VuvConfig,
    pub noise_estimation: NoiseEstimation,
    pub band_tolerance: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for EnhanceConfig {
    fn default() -> Self {
        Self {
            frame_len: 512,
            hop: 256,
            window: Window::Hann,
            wavelet: WaveletName::Db4,
            depth: 4,
            method: Method::UniversalHard,
            fixed_threshold: None,
            vuv: VuvConfig::default(),
            noise_estimation: NoiseEstimation::LeadingSilence { ms: 100.0 },
            band_tolerance: DEFAULT_BAND_TOLERANCE,
            epsilon: DEFAULT_EPSILON,
            seed: 0,
        }
    }
}

impl EnhanceConfig {
    pub fn filter(&self) -> FilterBank {
        FilterBank::new(self.wavelet)
    }

    pub fn leaf_len(&self) -> usize {
        self.frame_len >> self.depth
    }

    pub fn subbands(&self) -> usize {
        1 << self.depth
    }

    /// Unvoiced/voiced entropy boundary for one frame.
    pub fn entropy_threshold(&self) -> f64 {
        self.vuv
            .entropy_threshold
            .unwrap_or_else(|| 0.5 * (bin_count(self.frame_len) as f64).ln())
    }

    pub fn validate(&self) -> Result<()> {
        check_framing(self.frame_len, self.hop).map_err(as_config)?;
        check_decomposition(self.frame_len, self.depth, &self.filter()).map_err(as_config)?;
        if let Some(t) = self.fixed_threshold {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidConfig(format!("fixed threshold {t} must be >= 0")));
            }
        }
        let scale = self.vuv.unvoiced_scale;
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "unvoiced scale {scale} must lie in (0, 1]"
            )));
        }
        if let Some(t) = self.vuv.entropy_threshold {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::InvalidConfig(format!("entropy threshold {t} must be >= 0")));
            }
        }
        if let NoiseEstimation::LeadingSilence { ms } = self.noise_estimation {
            if !(ms.is_finite() && ms > 0.0) {
                return Err(Error::InvalidConfig(format!("silence span {ms} ms must be positive")));
            }
        }
        if !(self.band_tolerance.is_finite() && self.band_tolerance >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "band tolerance {} must be >= 0",
                self.band_tolerance
            )));
        }
        // the frame-level histogram has the most bins of any fixed-size one
        let max_bins = bin_count(self.frame_len) as f64;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 / max_bins) {
            return Err(Error::InvalidConfig(format!(
                "epsilon {} must lie in (0, 1/{max_bins})",
                self.epsilon
            )));
        }
        Ok(())
    }
}

fn as_config(e: Error) -> Error {
    Error::InvalidConfig(e.to_string())
}
