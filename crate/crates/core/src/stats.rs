//! Coefficient histograms, smoothed probability estimates and the
//! divergence measures used to compare a noisy subband with its noise
//! estimate. All logarithms are natural, so every value is in nats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Floor applied to empty bins before taking logarithms.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Span added on each side when all histogrammed values coincide.
const DEGENERATE_HALF_SPAN: f64 = 1e-9;

/// Bin count for `n` samples: `max(1, floor(sqrt(n) / 2))`.
pub fn bin_count(n: usize) -> usize {
    // floor(sqrt(n) / 2) == floor(isqrt(n) / 2)
    ((n as u64).isqrt() as usize / 2).max(1)
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::InvalidEdges(format!(
            "need at least two edges, got {}",
            edges.len()
        )));
    }
    if edges.iter().any(|e| !e.is_finite()) {
        return Err(Error::InvalidEdges("non-finite edge".into()));
    }
    if edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidEdges("edges are not strictly increasing".into()));
    }
    Ok(())
}

/// Bin holding `v`: right-open bins, last bin right-closed, values outside
/// the edges clamped to the end bins.
fn bin_index(edges: &[f64], v: f64) -> usize {
    let bins = edges.len() - 1;
    edges
        .partition_point(|&e| e <= v)
        .saturating_sub(1)
        .min(bins - 1)
}

fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let (lo, hi) = if hi > lo {
        (lo, hi)
    } else {
        (lo - DEGENERATE_HALF_SPAN, hi + DEGENERATE_HALF_SPAN)
    };
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + i as f64 * width).collect();
    edges.push(hi);
    edges
}

/// Edges over the pooled range of two samples, with the bin count taken
/// from the first sample's size.
pub fn shared_edges(first: &[f64], second: &[f64]) -> Result<Vec<f64>> {
    if first.is_empty() {
        return Err(Error::EmptyInput("histogram values"));
    }
    let (lo, hi) = finite_range(first.iter().chain(second))?;
    Ok(uniform_edges(lo, hi, bin_count(first.len())))
}

/// `bins` equal bins over `[-half_width, half_width]`. With an odd bin count
/// the middle bin is centred on zero.
pub fn symmetric_edges(half_width: f64, bins: usize) -> Result<Vec<f64>> {
    if !half_width.is_finite() || half_width < 0.0 || bins == 0 {
        return Err(Error::InvalidEdges(format!(
            "cannot build {bins} bins over +/-{half_width}"
        )));
    }
    Ok(uniform_edges(-half_width, half_width, bins))
}

fn finite_range<'a>(values: impl Iterator<Item = &'a f64>) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if !v.is_finite() {
            return Err(Error::InvalidSignal("non-finite histogram value".into()));
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }
}

/// Histograms `values`. Without `edges` the bin count follows
/// [`bin_count`] and the bins span `[min, max]`; with `edges`, values
/// outside the range land in the end bins.
pub fn build_histogram(values: &[f64], edges: Option<&[f64]>) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::EmptyInput("histogram values"));
    }
    let bin_edges = match edges {
        Some(e) => {
            check_edges(e)?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidSignal("non-finite histogram value".into()));
            }
            e.to_vec()
        }
        None => {
            let (lo, hi) = finite_range(values.iter())?;
            uniform_edges(lo, hi, bin_count(values.len()))
        }
    };
    let mut counts = vec![0u64; bin_edges.len() - 1];
    for &v in values {
        counts[bin_index(&bin_edges, v)] += 1;
    }
    Ok(Histogram {
        bin_edges,
        counts,
        total: values.len() as u64,
    })
}

/// A smoothed distribution over histogram bins: every entry is at least
/// `epsilon` and the entries sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
    bin_edges: Vec<f64>,
    epsilon: f64,
}

impl ProbabilityVector {
    /// Normalizes non-negative `weights`, raises entries below `epsilon` to
    /// `epsilon` and rescales the remaining entries so the total stays one.
    pub fn from_weights(weights: &[f64], bin_edges: &[f64], epsilon: f64) -> Result<Self> {
        check_edges(bin_edges)?;
        let bins = weights.len();
        if bins != bin_edges.len() - 1 {
            return Err(Error::InvalidEdges(format!(
                "{bins} weights for {} bins",
                bin_edges.len() - 1
            )));
        }
        if !(epsilon > 0.0 && epsilon < 1.0 / bins as f64) {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidSignal("weights must be finite and non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroPower("histogram weights"));
        }
        let mut probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let floored = probs.iter().filter(|&&p| p < epsilon).count();
        if floored > 0 {
            let kept: f64 = probs.iter().filter(|&&p| p >= epsilon).sum();
            let scale = (1.0 - floored as f64 * epsilon) / kept;
            for p in &mut probs {
                *p = if *p < epsilon { epsilon } else { *p * scale };
            }
        }
        Ok(Self {
            probs,
            bin_edges: bin_edges.to_vec(),
            epsilon,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn bins(&self) -> usize {
        self.probs.len()
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    fn check_same_support(&self, other: &ProbabilityVector) -> Result<()> {
        if self.probs.len() != other.probs.len() || self.bin_edges != other.bin_edges {
            return Err(Error::MismatchedSupport);
        }
        Ok(())
    }
}

pub fn to_probability(h: &Histogram, epsilon: f64) -> Result<ProbabilityVector> {
    let weights: Vec<f64> = h.counts.iter().map(|&c| c as f64).collect();
    ProbabilityVector::from_weights(&weights, &h.bin_edges, epsilon)
}

/// `sum_i p_i ln(p_i / q_i)`
pub fn kl_divergence(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    p.check_same_support(q)?;
    Ok(p
        .probs
        .iter()
        .zip(&q.probs)
        .map(|(a, b)| a * (a / b).ln())
        .sum())
}

/// `D(p_ns || p_n) + D(p_n || p_ns)`
pub fn symmetric_divergence(p_ns: &ProbabilityVector, p_n: &ProbabilityVector) -> Result<f64> {
    Ok(kl_divergence(p_ns, p_n)? + kl_divergence(p_n, p_ns)?)
}

/// Per-bin terms of the symmetric divergence,
/// `(p_i - q_i) ln(p_i / q_i)`, each non-negative.
pub fn divergence_contributions(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<Vec<f64>> {
    p.check_same_support(q)?;
    Ok(p
        .probs
        .iter()
        .zip(&q.probs)
        .map(|(a, b)| ((a - b) * (a / b).ln()).abs())
        .collect())
}

pub fn entropy(p: &ProbabilityVector) -> f64 {
    -p.probs.iter().map(|x| x * x.ln()).sum::<f64>()
}

/// Index of the bin containing zero.
pub fn zero_bin(edges: &[f64]) -> Result<usize> {
    check_edges(edges)?;
    let (lo, hi) = (edges[0], edges[edges.len() - 1]);
    if !(lo <= 0.0 && 0.0 <= hi) {
        return Err(Error::SupportMissingZero { lo, hi });
    }
    Ok(bin_index(edges, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub bin_center: f64,
    pub ratio: f64,
}

/// `p_ns(i) / p_n(i)` per bin, nearest-to-zero bin first.
pub fn ratio_profile(p_ns: &ProbabilityVector, p_n: &ProbabilityVector) -> Result<Vec<RatioPoint>> {
    p_ns.check_same_support(p_n)?;
    zero_bin(&p_ns.bin_edges)?;
    let mut points: Vec<RatioPoint> = p_ns
        .bin_centers()
        .into_iter()
        .zip(p_ns.probs.iter().zip(&p_n.probs))
        .map(|(c, (a, b))| RatioPoint {
            bin_center: c,
            ratio: a / b,
        })
        .collect();
    // stable: equal magnitudes keep the negative side first
    points.sort_by(|a, b| a.bin_center.abs().total_cmp(&b.bin_center.abs()));
    Ok(points)
}
