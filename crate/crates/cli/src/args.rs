use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wavedenoise::experiment::Preset;
use wavedenoise::pipeline::VuvConfig;
use wavedenoise::{EnhanceConfig, Method, NoiseEstimation, Window, WaveletName};

pub const SEED_ENV: &str = "WAVEDENOISE_SEED";

#[derive(Debug, Parser)]
#[command(name = "wavedenoise", version, about = "Wavelet-packet denoising of mono WAV audio")]
pub struct Cli {
    /// Print a short run summary on stderr
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enhance a noisy recording
    Denoise(DenoiseArgs),
    /// Compare subband coefficient histograms of a recording and a noise sample
    Analyze(AnalyzeArgs),
    /// Write deterministic test material
    Synth(SynthArgs),
    /// Run a built-in synthetic experiment and print its SNRs
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    #[arg(long = "in", value_name = "WAV")]
    pub input: PathBuf,
    #[arg(long, value_name = "WAV")]
    pub out: PathBuf,
    /// Clean reference; adds input and output SNR to the report
    #[arg(long = "ref", value_name = "WAV")]
    pub reference: Option<PathBuf>,
    #[arg(long, value_name = "JSON")]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in", value_name = "WAV")]
    pub input: PathBuf,
    #[arg(long, value_name = "WAV")]
    pub noise: PathBuf,
    #[arg(long, value_name = "JSON")]
    pub report: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthKindArg {
    Sine,
    Noise,
    Mix,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKindArg,
    #[arg(long, value_name = "WAV")]
    pub out: PathBuf,
    /// Sine-to-noise ratio of a mix
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub snr_db: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 440.0)]
    pub freq_hz: f64,
    #[arg(long, default_value_t = 0.5)]
    pub amplitude: f64,
    /// Standard deviation of generated noise before mixing
    #[arg(long, default_value_t = 0.1)]
    pub std_dev: f64,
    #[arg(long, default_value_t = 5.0)]
    pub duration_s: f64,
    #[arg(long, default_value_t = 16_000)]
    pub sample_rate: u32,
    /// Zero the sine over this many leading milliseconds
    #[arg(long, default_value_t = 0.0)]
    pub silence_ms: f64,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value = "sine-0db")]
    pub preset: Preset,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "universal-hard")]
    pub method: Method,
    #[arg(long, value_name = "JSON")]
    pub report: Option<PathBuf>,
    /// Also write the enhanced signal
    #[arg(long, value_name = "WAV")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseEstimationArg {
    LeadingSilence,
    Mad,
}

/// Pipeline settings shared by `denoise` and `analyze`. Defaults mirror
/// [`EnhanceConfig::default`].
#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long, default_value = "universal-hard")]
    pub method: Method,
    #[arg(long, default_value_t = 512)]
    pub frame_len: usize,
    #[arg(long, default_value_t = 256)]
    pub hop: usize,
    #[arg(long, default_value = "hann")]
    pub window: Window,
    #[arg(long, default_value = "db4")]
    pub wavelet: WaveletName,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, value_enum, default_value = "leading-silence")]
    pub noise_estimation: NoiseEstimationArg,
    /// Length of the noise-only lead-in for leading-silence estimation
    #[arg(long, default_value_t = 100.0)]
    pub silence_ms: f64,
    /// Disable voiced/unvoiced threshold scaling
    #[arg(long)]
    pub no_vuv: bool,
    /// Entropy in nats below which a frame is unvoiced
    #[arg(long)]
    pub entropy_threshold: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub unvoiced_scale: f64,
    /// Per-bin divergence tolerance of the band method, in nats
    #[arg(long, default_value_t = 1e-3)]
    pub band_tolerance: f64,
    /// Probability floor of empty histogram bins
    #[arg(long, default_value_t = 1e-12)]
    pub epsilon: f64,
    /// Fixed scalar threshold in place of the universal estimate
    #[arg(long)]
    pub threshold: Option<f64>,
}

impl ConfigArgs {
    pub fn to_config(&self, seed: u64) -> EnhanceConfig {
        EnhanceConfig {
            frame_len: self.frame_len,
            hop: self.hop,
            window: self.window,
            wavelet: self.wavelet,
            depth: self.depth,
            method: self.method,
            fixed_threshold: self.threshold,
            vuv: VuvConfig {
                enabled: !self.no_vuv,
                entropy_threshold: self.entropy_threshold,
                unvoiced_scale: self.unvoiced_scale,
            },
            noise_estimation: match self.noise_estimation {
                NoiseEstimationArg::LeadingSilence => NoiseEstimation::LeadingSilence { ms: self.silence_ms },
                NoiseEstimationArg::Mad => NoiseEstimation::Mad,
            },
            band_tolerance: self.band_tolerance,
            epsilon: self.epsilon,
            seed,
        }
    }
}
