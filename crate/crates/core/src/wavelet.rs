//! Orthonormal two-channel filter banks and the full wavelet-packet tree.
//!
//! All convolutions are periodic over the frame, which keeps every stage an
//! orthogonal map: leaf energy equals frame energy and synthesis is the
//! transpose of analysis.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveletName {
    Haar,
    /// Daubechies with four vanishing moments (8 taps).
    Db4,
}

impl fmt::Display for WaveletName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WaveletName::Haar => "haar",
            WaveletName::Db4 => "db4",
        })
    }
}

impl FromStr for WaveletName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "haar" => Ok(WaveletName::Haar),
            "db4" => Ok(WaveletName::Db4),
            other => Err(Error::InvalidConfig(format!("unknown wavelet '{other}'"))),
        }
    }
}

const DB4_LOWPASS: [f64; 8] = [
    0.230_377_813_308_896_5,
    0.714_846_570_552_915_7,
    0.630_880_767_929_858_9,
    -0.027_983_769_416_859_854,
    -0.187_034_811_719_093_09,
    0.030_841_381_835_560_764,
    0.032_883_011_666_885_2,
    -0.010_597_401_785_069_032,
];

#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    name: WaveletName,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl FilterBank {
    pub fn new(name: WaveletName) -> Self {
        let lowpass = match name {
            WaveletName::Haar => vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            WaveletName::Db4 => DB4_LOWPASS.to_vec(),
        };
        let l = lowpass.len();
        // quadrature mirror: g[k] = (-1)^k h[L-1-k]
        let highpass = (0..l)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * lowpass[l - 1 - k]
            })
            .collect();
        Self {
            name,
            lowpass,
            highpass,
        }
    }

    pub fn haar() -> Self {
        Self::new(WaveletName::Haar)
    }

    pub fn db4() -> Self {
        Self::new(WaveletName::Db4)
    }

    pub fn name(&self) -> WaveletName {
        self.name
    }

    pub fn lowpass(&self) -> &[f64] {
        &self.lowpass
    }

    pub fn highpass(&self) -> &[f64] {
        &self.highpass
    }

    pub fn len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lowpass.is_empty()
    }
}

/// One level of periodic analysis: `a[k] = sum_n h[n] x[(2k + n) mod N]`,
/// likewise for the detail branch with the highpass filter.
pub fn analysis_step(input: &[f64], filter: &FilterBank) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = input.len();
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidWaveletInput(format!("odd input length {n}")));
    }
    if n < filter.len() {
        return Err(Error::InvalidWaveletInput(format!(
            "input length {n} shorter than the {}-tap filter",
            filter.len()
        )));
    }
    let half = n / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for (j, (h, g)) in filter.lowpass.iter().zip(&filter.highpass).enumerate() {
            let x = input[(2 * k + j) % n];
            a += h * x;
            d += g * x;
        }
        approx[k] = a;
        detail[k] = d;
    }
    Ok((approx, detail))
}

/// Transpose of [`analysis_step`], which is its inverse for an orthonormal
/// filter bank.
pub fn synthesis_step(approx: &[f64], detail: &[f64], filter: &FilterBank) -> Result<Vec<f64>> {
    if approx.len() != detail.len() {
        return Err(Error::InvalidWaveletInput(format!(
            "approximation has {} coefficients, detail has {}",
            approx.len(),
            detail.len()
        )));
    }
    let n = 2 * approx.len();
    if n < filter.len() {
        return Err(Error::InvalidWaveletInput(format!(
            "output length {n} shorter than the {}-tap filter",
            filter.len()
        )));
    }
    let mut out = vec![0.0; n];
    for (k, (a, d)) in approx.iter().zip(detail).enumerate() {
        for (j, (h, g)) in filter.lowpass.iter().zip(&filter.highpass).enumerate() {
            out[(2 * k + j) % n] += h * a + g * d;
        }
    }
    Ok(out)
}

/// Full wavelet-packet expansion of one frame.
///
/// `levels[l]` holds the `2^l` nodes of level `l`; node `i` splits into
/// `2i` (lowpass branch) and `2i + 1` (highpass branch). Level 0 is the
/// frame itself. Reconstruction reads only the leaf level, so edits made
/// through [`CoefficientTree::leaves_mut`] are what gets synthesized.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTree {
    depth: usize,
    frame_len: usize,
    filter: FilterBank,
    levels: Vec<Vec<Vec<f64>>>,
}

impl CoefficientTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn frame_len(&self) -> usize {
        self.frame_len
    }

    pub fn filter(&self) -> &FilterBank {
        &self.filter
    }

    pub fn node(&self, level: usize, index: usize) -> Option<&[f64]> {
        self.levels.get(level)?.get(index).map(Vec::as_slice)
    }

    pub fn leaves(&self) -> &[Vec<f64>] {
        &self.levels[self.depth]
    }

    pub fn leaves_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.levels[self.depth]
    }

    pub fn leaf_len(&self) -> usize {
        self.frame_len >> self.depth
    }

    pub fn leaf_energy(&self) -> f64 {
        self.leaves().iter().flatten().map(|c| c * c).sum()
    }

    /// All leaf coefficients, subband by subband.
    pub fn pooled_leaves(&self) -> Vec<f64> {
        self.leaves().iter().flatten().copied().collect()
    }
}

/// Checks that a frame of `frame_len` samples can be split `depth` times.
pub fn check_decomposition(frame_len: usize, depth: usize, filter: &FilterBank) -> Result<()> {
    if depth == 0 {
        return Err(Error::InvalidWaveletInput("depth must be at least 1".into()));
    }
    if !frame_len.is_power_of_two() || frame_len.trailing_zeros() < depth as u32 {
        return Err(Error::InvalidWaveletInput(format!(
            "frame length {frame_len} cannot be halved {depth} times"
        )));
    }
    let leaf = frame_len >> depth;
    if leaf < filter.len() {
        return Err(Error::InvalidWaveletInput(format!(
            "depth {depth} leaves {leaf} coefficients per subband, fewer than the {}-tap filter",
            filter.len()
        )));
    }
    Ok(())
}

pub fn wp_decompose(frame: &[f64], filter: &FilterBank, depth: usize) -> Result<CoefficientTree> {
    check_decomposition(frame.len(), depth, filter)?;
    let mut levels = Vec::with_capacity(depth + 1);
    levels.push(vec![frame.to_vec()]);
    for level in 0..depth {
        let mut next = Vec::with_capacity(2 << level);
        for node in &levels[level] {
            let (a, d) = analysis_step(node, filter)?;
            next.push(a);
            next.push(d);
        }
        levels.push(next);
    }
    Ok(CoefficientTree {
        depth,
        frame_len: frame.len(),
        filter: filter.clone(),
        levels,
    })
}

pub fn wp_reconstruct(tree: &CoefficientTree) -> Result<Vec<f64>> {
    let leaves = tree
        .levels
        .get(tree.depth)
        .ok_or_else(|| Error::MalformedTree(format!("missing leaf level {}", tree.depth)))?;
    if leaves.len() != 1 << tree.depth {
        return Err(Error::MalformedTree(format!(
            "{} leaves at depth {}",
            leaves.len(),
            tree.depth
        )));
    }
    let leaf_len = tree.leaf_len();
    if let Some(bad) = leaves.iter().find(|l| l.len() != leaf_len) {
        return Err(Error::MalformedTree(format!(
            "leaf of {} coefficients, expected {leaf_len}",
            bad.len()
        )));
    }
    let mut current = leaves.clone();
    while current.len() > 1 {
        current = current
            .chunks_exact(2)
            .map(|pair| synthesis_step(&pair[0], &pair[1], &tree.filter))
            .collect::<Result<_>>()?;
    }
    Ok(current.pop().expect("root node"))
}
