use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::stats::{build_histogram, entropy, to_probability};
use crate::wavelet::CoefficientTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Voicing {
    Voiced,
    Unvoiced,
}

/// Entropy of the histogram of all leaf coefficients of one frame.
pub fn frame_entropy(tree: &CoefficientTree, epsilon: f64) -> Result<f64> {
    let pooled = tree.pooled_leaves();
    let p = to_probability(&build_histogram(&pooled, None)?, epsilon)?;
    Ok(entropy(&p))
}

/// Unvoiced when the frame entropy is strictly below `entropy_threshold`.
pub fn classify_vuv(tree: &CoefficientTree, entropy_threshold: f64, epsilon: f64) -> Result<Voicing> {
    Ok(voicing_for(frame_entropy(tree, epsilon)?, entropy_threshold))
}

pub(crate) fn voicing_for(entropy: f64, threshold: f64) -> Voicing {
    if entropy < threshold {
        Voicing::Unvoiced
    } else {
        Voicing::Voiced
    }
}
