//! Machine-readable run reports. The JSON layout is described by
//! `schema/report.schema.json` at the repository root; bump
//! [`SCHEMA_VERSION`] with any change to it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{EnhanceConfig, Voicing};
use crate::stats::RatioPoint;
use crate::thresholding::ThresholdSpec;

pub const SCHEMA_VERSION: u32 = 1;

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbandRecord {
    pub subband: usize,
    pub sigma: f64,
    #[serde(flatten)]
    pub threshold: ThresholdSpec,
    /// Scalar threshold before any unvoiced scaling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voiced_threshold: Option<f64>,
    /// Symmetric divergence between this frame's subband histogram and the
    /// noise histogram (band method only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<f64>,
    pub zeros_before: usize,
    pub zeros_after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameRecord {
    pub index: usize,
    pub vuv: Voicing,
    pub entropy: f64,
    pub subbands: Vec<SubbandRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbandSummary {
    pub subband: usize,
    pub noise_sigma: f64,
    /// Whole-signal subband histogram against the noise histogram.
    pub symmetric_divergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub kind: String,
    pub schema_version: u32,
    pub tool_version: String,
    pub seed: u64,
    pub config: EnhanceConfig,
    pub noise_frames: usize,
    pub entropy_threshold: f64,
    pub frames: Vec<FrameRecord>,
    pub subbands: Vec<SubbandSummary>,
    /// Noisy-to-noise probability ratio per pooled bin, nearest zero first.
    pub near_zero_ratios: Vec<RatioPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_snr_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_snr_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramPair {
    pub bin_edges: Vec<f64>,
    pub noisy_counts: Vec<u64>,
    pub noise_counts: Vec<u64>,
    pub kl_noisy_to_noise: f64,
    pub kl_noise_to_noisy: f64,
    pub symmetric_divergence: f64,
    pub ratio_profile: Vec<RatioPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbandAnalysis {
    pub subband: usize,
    #[serde(flatten)]
    pub histograms: HistogramPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub kind: String,
    pub schema_version: u32,
    pub tool_version: String,
    pub config: EnhanceConfig,
    pub subbands: Vec<SubbandAnalysis>,
    pub pooled: HistogramPair,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidSignal(format!("report serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }
}
