//! Noise-level estimation and the shrinkage rules applied to subband
//! coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{divergence_contributions, zero_bin, ProbabilityVector};

/// Median absolute deviation of a standard normal.
pub const MAD_TO_SIGMA: f64 = 0.6745;

/// Default per-bin divergence tolerance for [`select_band`], in nats.
pub const DEFAULT_BAND_TOLERANCE: f64 = 1e-3;

/// A shrinkage rule with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ThresholdSpec {
    Hard { t: f64 },
    Soft { t: f64 },
    /// `t1 == t2` degenerates to hard thresholding at `t1`.
    Semisoft { t1: f64, t2: f64 },
    /// Removes every coefficient inside the signed interval `[t1, t2]`.
    BandHard { t1: f64, t2: f64 },
}

impl ThresholdSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ThresholdSpec::Hard { t } | ThresholdSpec::Soft { t } => check_t(t),
            ThresholdSpec::Semisoft { t1, t2 } => {
                check_t(t1)?;
                check_t(t2)?;
                if t1 > t2 {
                    return Err(Error::InvalidThreshold(format!("t1 {t1} exceeds t2 {t2}")));
                }
                Ok(())
            }
            ThresholdSpec::BandHard { t1, t2 } => check_band(t1, t2),
        }
    }

    pub fn apply(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        match *self {
            ThresholdSpec::Hard { t } => hard_threshold(coeffs, t),
            ThresholdSpec::Soft { t } => soft_threshold(coeffs, t),
            ThresholdSpec::Semisoft { t1, t2 } if t1 == t2 => hard_threshold(coeffs, t1),
            ThresholdSpec::Semisoft { t1, t2 } => semisoft_threshold(coeffs, t1, t2),
            ThresholdSpec::BandHard { t1, t2 } => band_hard_threshold(coeffs, t1, t2),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidThreshold(format!("threshold {t} must be >= 0")));
    }
    Ok(())
}

fn check_band(t1: f64, t2: f64) -> Result<()> {
    if t1.is_nan() || t2.is_nan() || t1 > t2 {
        return Err(Error::InvalidThreshold(format!("band [{t1}, {t2}] is empty")));
    }
    Ok(())
}

/// `median(|c|) / 0.6745`
pub fn estimate_sigma(detail_coeffs: &[f64]) -> Result<f64> {
    if detail_coeffs.is_empty() {
        return Err(Error::EmptyInput("coefficients for sigma estimate"));
    }
    let mut mags: Vec<f64> = detail_coeffs.iter().map(|c| c.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let mid = mags.len() / 2;
    let median = if mags.len().is_multiple_of(2) {
        0.5 * (mags[mid - 1] + mags[mid])
    } else {
        mags[mid]
    };
    Ok(median / MAD_TO_SIGMA)
}

/// `sigma * sqrt(2 ln n)`
pub fn universal_threshold(sigma: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidThreshold("universal threshold needs n >= 1".into()));
    }
    check_t(sigma)?;
    Ok(sigma * (2.0 * (n as f64).ln()).sqrt())
}

/// Zeroes entries with `|w| < t`; entries with `|w| >= t` pass unchanged.
pub fn hard_threshold(coeffs: &[f64], t: f64) -> Result<Vec<f64>> {
    check_t(t)?;
    Ok(coeffs
        .iter()
        .map(|&w| if w.abs() < t { 0.0 } else { w })
        .collect())
}

/// `sign(w) * max(|w| - t, 0)`
pub fn soft_threshold(coeffs: &[f64], t: f64) -> Result<Vec<f64>> {
    check_t(t)?;
    Ok(coeffs
        .iter()
        .map(|&w| {
            let m = w.abs() - t;
            if m > 0.0 {
                m.copysign(w)
            } else {
                0.0
            }
        })
        .collect())
}

/// Zero for `|w| <= t1`, identity for `|w| > t2`, and the linear ramp
/// `sign(w) * t2 (|w| - t1) / (t2 - t1)` joining them.
pub fn semisoft_threshold(coeffs: &[f64], t1: f64, t2: f64) -> Result<Vec<f64>> {
    check_t(t1)?;
    check_t(t2)?;
    if t1 >= t2 {
        return Err(Error::InvalidThreshold(format!(
            "semisoft needs t1 < t2, got {t1} and {t2}"
        )));
    }
    let slope = t2 / (t2 - t1);
    Ok(coeffs
        .iter()
        .map(|&w| {
            let m = w.abs();
            if m <= t1 {
                0.0
            } else if m <= t2 {
                (slope * (m - t1)).copysign(w)
            } else {
                w
            }
        })
        .collect())
}

/// Zeroes entries with `t1 <= w <= t2`.
pub fn band_hard_threshold(coeffs: &[f64], t1: f64, t2: f64) -> Result<Vec<f64>> {
    check_band(t1, t2)?;
    Ok(coeffs
        .iter()
        .map(|&w| if (t1..=t2).contains(&w) { 0.0 } else { w })
        .collect())
}

/// Grows a run of bins outward from the bin containing zero while each
/// bin's symmetric-divergence term stays within `tolerance`, and returns the
/// coefficient values bounding the run. Left and right sides stop
/// independently at their first failing bin; the zero bin is always part of
/// the band.
pub fn select_band(
    p_ns: &ProbabilityVector,
    p_n: &ProbabilityVector,
    tolerance: f64,
) -> Result<(f64, f64)> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvalidThreshold(format!(
            "band tolerance {tolerance} must be >= 0"
        )));
    }
    let contributions = divergence_contributions(p_ns, p_n)?;
    let edges = p_ns.bin_edges();
    let center = zero_bin(edges)?;
    let mut lo = center;
    while lo > 0 && contributions[lo - 1] <= tolerance {
        lo -= 1;
    }
    let mut hi = center;
    while hi + 1 < contributions.len() && contributions[hi + 1] <= tolerance {
        hi += 1;
    }
    Ok((edges[lo], edges[hi + 1]))
}
