use serde::{Deserialize, Serialize};

use super::config::{EnhanceConfig, NoiseEstimation};
use crate::error::{Error, Result};
use crate::framing::{frame_count, make_frames, Window};
use crate::signal_io::SignalBuffer;
use crate::stats::{bin_count, build_histogram, symmetric_edges, to_probability, ProbabilityVector};
use crate::thresholding::estimate_sigma;
use crate::wavelet::wp_decompose;

/// Bin count for histograms compared against `n`-sample subbands: the usual
/// rule, rounded up to odd so the middle bin is centred on zero.
pub fn comparison_bins(n: usize) -> usize {
    bin_count(n) | 1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubbandNoise {
    pub sigma: f64,
    /// Noise coefficient distribution over zero-centred bins spanning the
    /// largest noise magnitude seen in this subband.
    pub distribution: ProbabilityVector,
}

/// Per-subband noise statistics, in the coefficient domain of the
/// configured framing and wavelet tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseProfile {
    subbands: Vec<SubbandNoise>,
    /// All subbands pooled, binned by the pooled sample count.
    pooled: ProbabilityVector,
    frames_used: usize,
}

impl NoiseProfile {
    pub fn subbands(&self) -> &[SubbandNoise] {
        &self.subbands
    }

    pub fn pooled(&self) -> &ProbabilityVector {
        &self.pooled
    }

    pub fn frames_used(&self) -> usize {
        self.frames_used
    }
}

/// Frames entirely inside the first `span` samples.
fn frames_within(span: usize, frame_len: usize, hop: usize) -> usize {
    (span - frame_len) / hop + 1
}

/// Leaf coefficients of the first `used` frames, gathered per subband.
fn leading_leaves(signal: &SignalBuffer, config: &EnhanceConfig, window: Window, used: usize) -> Result<Vec<Vec<f64>>> {
    let frames = make_frames(signal, config.frame_len, config.hop, window)?;
    let filter = config.filter();
    let mut per_subband = vec![Vec::with_capacity(used * config.leaf_len()); config.subbands()];
    for frame in &frames.frames()[..used] {
        let tree = wp_decompose(frame, &filter, config.depth)?;
        for (acc, leaf) in per_subband.iter_mut().zip(tree.leaves()) {
            acc.extend_from_slice(leaf);
        }
    }
    Ok(per_subband)
}

/// Sigma is the noise level of the unwindowed signal in each subband, so the
/// windowed coefficients seen by the thresholds never exceed it on average.
/// The distributions are built from windowed coefficients, the same domain
/// the band method compares against.
pub fn estimate_noise_profile(signal: &SignalBuffer, config: &EnhanceConfig) -> Result<NoiseProfile> {
    config.validate()?;
    let used = match config.noise_estimation {
        NoiseEstimation::LeadingSilence { ms } => {
            let span = signal.samples_for_ms(ms);
            if span < config.frame_len {
                return Err(Error::InvalidConfig(format!(
                    "silence span of {span} samples is shorter than one {}-sample frame",
                    config.frame_len
                )));
            }
            if signal.len() <= span {
                return Err(Error::InvalidSignal(format!(
                    "signal of {} samples is not longer than the {span}-sample silence span",
                    signal.len()
                )));
            }
            frames_within(span, config.frame_len, config.hop)
        }
        NoiseEstimation::Mad => frame_count(signal.len(), config.frame_len, config.hop),
    };

    let raw = leading_leaves(signal, config, Window::Rectangular, used)?;
    let windowed = if config.window == Window::Rectangular {
        raw.clone()
    } else {
        leading_leaves(signal, config, config.window, used)?
    };

    let bins = comparison_bins(config.leaf_len());
    let subbands = raw
        .iter()
        .zip(&windowed)
        .map(|(r, w)| {
            Ok(SubbandNoise {
                sigma: estimate_sigma(r)?,
                distribution: zero_centred_distribution(w, bins, config.epsilon)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let pooled: Vec<f64> = windowed.concat();
    let pooled = zero_centred_distribution(&pooled, comparison_bins(pooled.len()), config.epsilon)?;

    Ok(NoiseProfile {
        subbands,
        pooled,
        frames_used: used,
    })
}

fn zero_centred_distribution(values: &[f64], bins: usize, epsilon: f64) -> Result<ProbabilityVector> {
    let half = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edges = symmetric_edges(half, bins)?;
    to_probability(&build_histogram(values, Some(&edges))?, epsilon)
}
