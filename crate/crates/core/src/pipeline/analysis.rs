use super::config::EnhanceConfig;
use crate::error::Result;
use crate::framing::make_frames;
use crate::report::{tool_version, AnalysisReport, HistogramPair, SubbandAnalysis, SCHEMA_VERSION};
use crate::signal_io::SignalBuffer;
use crate::stats::{
    build_histogram, kl_divergence, ratio_profile, shared_edges, symmetric_divergence, to_probability,
};
use crate::wavelet::wp_decompose;

/// Leaf coefficients of every frame, gathered per subband.
fn subband_coefficients(signal: &SignalBuffer, config: &EnhanceConfig) -> Result<Vec<Vec<f64>>> {
    let frames = make_frames(signal, config.frame_len, config.hop, config.window)?;
    let filter = config.filter();
    let mut out = vec![Vec::new(); config.subbands()];
    for frame in frames.frames() {
        let tree = wp_decompose(frame, &filter, config.depth)?;
        for (acc, leaf) in out.iter_mut().zip(tree.leaves()) {
            acc.extend_from_slice(leaf);
        }
    }
    Ok(out)
}

fn compare(noisy: &[f64], noise: &[f64], epsilon: f64) -> Result<HistogramPair> {
    let edges = shared_edges(noisy, noise)?;
    let h_ns = build_histogram(noisy, Some(&edges))?;
    let h_n = build_histogram(noise, Some(&edges))?;
    let p_ns = to_probability(&h_ns, epsilon)?;
    let p_n = to_probability(&h_n, epsilon)?;
    Ok(HistogramPair {
        kl_noisy_to_noise: kl_divergence(&p_ns, &p_n)?,
        kl_noise_to_noisy: kl_divergence(&p_n, &p_ns)?,
        symmetric_divergence: symmetric_divergence(&p_ns, &p_n)?,
        ratio_profile: ratio_profile(&p_ns, &p_n)?,
        bin_edges: edges,
        noisy_counts: h_ns.counts().to_vec(),
        noise_counts: h_n.counts().to_vec(),
    })
}

/// Compares the subband coefficient distributions of a noisy recording with
/// those of a noise recording, on bins shared by both.
pub fn analyze(noisy: &SignalBuffer, noise: &SignalBuffer, config: &EnhanceConfig) -> Result<AnalysisReport> {
    config.validate()?;
    let ns = subband_coefficients(noisy, config)?;
    let n = subband_coefficients(noise, config)?;
    let subbands = ns
        .iter()
        .zip(&n)
        .enumerate()
        .map(|(subband, (a, b))| {
            Ok(SubbandAnalysis {
                subband,
                histograms: compare(a, b, config.epsilon)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pooled = compare(&ns.concat(), &n.concat(), config.epsilon)?;
    Ok(AnalysisReport {
        kind: "analysis".into(),
        schema_version: SCHEMA_VERSION,
        tool_version: tool_version(),
        config: config.clone(),
        subbands,
        pooled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal_io::{synth_signal, SynthKind};

    #[test]
    fn identical_inputs_have_zero_divergence() {
        let x = synth_signal(SynthKind::WhiteNoise { std_dev: 0.3, seed: 2 }, 0.5, 16_000).unwrap();
        let r = analyze(&x, &x, &EnhanceConfig::default()).unwrap();
        assert_eq!(r.subbands.len(), 16);
        for s in &r.subbands {
            assert_eq!(s.histograms.symmetric_divergence, 0.0);
            assert_eq!(s.histograms.noisy_counts, s.histograms.noise_counts);
        }
        assert!(r.pooled.ratio_profile.iter().all(|p| p.ratio == 1.0));
    }

    #[test]
    fn different_noise_levels_diverge() {
        let a = synth_signal(SynthKind::WhiteNoise { std_dev: 0.3, seed: 2 }, 0.5, 16_000).unwrap();
        let b = synth_signal(SynthKind::WhiteNoise { std_dev: 0.1, seed: 3 }, 0.5, 16_000).unwrap();
        let r = analyze(&a, &b, &EnhanceConfig::default()).unwrap();
        assert!(r.subbands.iter().all(|s| s.histograms.symmetric_divergence > 0.1));
        // the narrower noise piles into the bins near zero
        assert!(r.pooled.ratio_profile[0].ratio < 1.0);
    }
}
