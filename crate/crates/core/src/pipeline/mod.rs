//! The five-stage enhancement system: framing, wavelet-packet
//! decomposition, per-subband thresholding, reconstruction and overlap-add,
//! driven by a per-subband noise profile and an entropy voicing decision.

mod analysis;
mod config;
mod profile;
mod vuv;

pub use analysis::analyze;
pub use config::{EnhanceConfig, Method, NoiseEstimation, VuvConfig};
pub use profile::{comparison_bins, estimate_noise_profile, NoiseProfile, SubbandNoise};
pub use vuv::{classify_vuv, frame_entropy, Voicing};

use crate::error::{Error, Result};
use crate::framing::{make_frames, overlap_add};
use crate::report::{tool_version, FrameRecord, Report, SubbandRecord, SubbandSummary, SCHEMA_VERSION};
use crate::signal_io::{snr_db, SignalBuffer};
use crate::stats::{build_histogram, ratio_profile, symmetric_divergence, to_probability, ProbabilityVector};
use crate::thresholding::{select_band, universal_threshold, ThresholdSpec};
use crate::wavelet::{wp_decompose, wp_reconstruct, CoefficientTree};

/// Runs the full pipeline on `noisy`. When `reference` is given, the report
/// also carries the input and output SNR against it.
pub fn enhance(
    noisy: &SignalBuffer,
    config: &EnhanceConfig,
    reference: Option<&SignalBuffer>,
) -> Result<(SignalBuffer, Report)> {
    config.validate()?;
    if noisy.is_empty() {
        return Err(Error::EmptyInput("noisy signal"));
    }
    if let Some(r) = reference {
        noisy.check_compatible(r)?;
    }

    let profile = estimate_noise_profile(noisy, config)?;
    let frames = make_frames(noisy, config.frame_len, config.hop, config.window)?;
    let filter = config.filter();
    let entropy_threshold = config.entropy_threshold();

    let mut subband_counts = vec![vec![0u64; comparison_bins(config.leaf_len())]; config.subbands()];
    let mut pooled_counts = vec![0u64; profile.pooled().bins()];
    let mut records = Vec::with_capacity(frames.len());
    let mut processed = Vec::with_capacity(frames.len());

    for (index, frame) in frames.frames().iter().enumerate() {
        let mut tree = wp_decompose(frame, &filter, config.depth)?;
        let entropy = frame_entropy(&tree, config.epsilon)?;
        let vuv = if config.vuv.enabled {
            vuv::voicing_for(entropy, entropy_threshold)
        } else {
            Voicing::Voiced
        };

        let pooled = build_histogram(&tree.pooled_leaves(), Some(profile.pooled().bin_edges()))?;
        add_counts(&mut pooled_counts, pooled.counts());

        let subbands = threshold_leaves(&mut tree, &profile, config, vuv, &mut subband_counts)?;
        processed.push(wp_reconstruct(&tree)?);
        records.push(FrameRecord {
            index,
            vuv,
            entropy,
            subbands,
        });
    }

    let output = overlap_add(&frames.with_frames(processed)?)?;

    let subbands = profile
        .subbands()
        .iter()
        .zip(&subband_counts)
        .enumerate()
        .map(|(subband, (noise, counts))| {
            let noisy = counts_to_probability(counts, &noise.distribution)?;
            Ok(SubbandSummary {
                subband,
                noise_sigma: noise.sigma,
                symmetric_divergence: symmetric_divergence(&noisy, &noise.distribution)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pooled_noisy = counts_to_probability(&pooled_counts, profile.pooled())?;
    let near_zero_ratios = ratio_profile(&pooled_noisy, profile.pooled())?;

    let (input_snr_db, output_snr_db) = match reference {
        Some(r) if r.energy() > 0.0 => (Some(snr_db(r, noisy)?), Some(snr_db(r, &output)?)),
        _ => (None, None),
    };

    let report = Report {
        kind: "enhance".into(),
        schema_version: SCHEMA_VERSION,
        tool_version: tool_version(),
        seed: config.seed,
        config: config.clone(),
        noise_frames: profile.frames_used(),
        entropy_threshold,
        frames: records,
        subbands,
        near_zero_ratios,
        input_snr_db,
        output_snr_db,
    };
    Ok((output, report))
}

fn add_counts(acc: &mut [u64], counts: &[u64]) {
    for (a, c) in acc.iter_mut().zip(counts) {
        *a += c;
    }
}

fn counts_to_probability(counts: &[u64], like: &ProbabilityVector) -> Result<ProbabilityVector> {
    let weights: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    ProbabilityVector::from_weights(&weights, like.bin_edges(), like.epsilon())
}

fn threshold_leaves(
    tree: &mut CoefficientTree,
    profile: &NoiseProfile,
    config: &EnhanceConfig,
    vuv: Voicing,
    subband_counts: &mut [Vec<u64>],
) -> Result<Vec<SubbandRecord>> {
    let leaf_len = tree.leaf_len();
    let mut records = Vec::with_capacity(profile.subbands().len());
    for (subband, (leaf, noise)) in tree.leaves_mut().iter_mut().zip(profile.subbands()).enumerate() {
        let hist = build_histogram(leaf, Some(noise.distribution.bin_edges()))?;
        add_counts(&mut subband_counts[subband], hist.counts());

        let (threshold, voiced_threshold, divergence) = match config.method {
            Method::UniversalHard | Method::UniversalSoft => {
                let voiced = match config.fixed_threshold {
                    Some(t) => t,
                    None => universal_threshold(noise.sigma, leaf_len)?,
                };
                let t = match vuv {
                    Voicing::Voiced => voiced,
                    Voicing::Unvoiced => voiced * config.vuv.unvoiced_scale,
                };
                let spec = if config.method == Method::UniversalHard {
                    ThresholdSpec::Hard { t }
                } else {
                    ThresholdSpec::Soft { t }
                };
                (spec, Some(voiced), None)
            }
            Method::Band => {
                let p_ns = to_probability(&hist, config.epsilon)?;
                let (t1, t2) = select_band(&p_ns, &noise.distribution, config.band_tolerance)?;
                let d = symmetric_divergence(&p_ns, &noise.distribution)?;
                (ThresholdSpec::BandHard { t1, t2 }, None, Some(d))
            }
        };

        let zeros_before = leaf.iter().filter(|&&c| c == 0.0).count();
        *leaf = threshold.apply(leaf)?;
        let zeros_after = leaf.iter().filter(|&&c| c == 0.0).count();
        records.push(SubbandRecord {
            subband,
            sigma: noise.sigma,
            threshold,
            voiced_threshold,
            divergence,
            zeros_before,
            zeros_after,
        });
    }
    Ok(records)
}
