//! Wavelet-packet speech denoising.
//!
//! A noisy signal is cut into overlapping windowed frames, each frame is
//! expanded into a uniform wavelet-packet tree, the leaf subbands are
//! thresholded against a noise profile, and the frames are resynthesized and
//! overlap-added. Subband coefficient histograms of the noisy signal and of
//! the noise estimate are compared with Kullback-Leibler divergences, which
//! also drives the band-removal thresholding rule.

pub mod error;
pub mod experiment;
pub mod framing;
pub mod pipeline;
pub mod report;
pub mod signal_io;
pub mod stats;
pub mod thresholding;
pub mod wavelet;

pub use error::{Error, Result};
pub use framing::{make_frames, overlap_add, FrameSet, Window};
pub use pipeline::{analyze, enhance, estimate_noise_profile, EnhanceConfig, Method, NoiseEstimation};
pub use report::{AnalysisReport, Report};
pub use signal_io::{mix_at_snr, read_wav, snr_db, synth_signal, write_wav, SignalBuffer, SynthKind};
pub use wavelet::{wp_decompose, wp_reconstruct, CoefficientTree, FilterBank, WaveletName};
