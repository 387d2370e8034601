use std::path::PathBuf;

/// Errors produced anywhere in the denoising library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("not a RIFF/WAVE file: {0}")]
    NotWave(String),

    #[error("unsupported wav format: {0}")]
    UnsupportedFormat(String),

    #[error("unsupported channel count {0}: only mono is accepted")]
    MultiChannel(u16),

    #[error("truncated wav data: {0}")]
    Truncated(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("sample-rate mismatch: {left} Hz vs {right} Hz")]
    RateMismatch { left: u32, right: u32 },

    #[error("zero-power signal: {0}")]
    ZeroPower(&'static str),

    #[error("invalid framing: {0}")]
    InvalidFraming(String),

    #[error("overlap-add normalization {value:e} below 1e-12 at sample {sample}")]
    NonCola { sample: usize, value: f64 },

    #[error("invalid wavelet input: {0}")]
    InvalidWaveletInput(String),

    #[error("malformed coefficient tree: {0}")]
    MalformedTree(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid bin edges: {0}")]
    InvalidEdges(String),

    #[error("invalid epsilon {0}")]
    InvalidEpsilon(f64),

    #[error("distributions do not share a common support")]
    MismatchedSupport,

    #[error("bin support [{lo}, {hi}] does not contain zero")]
    SupportMissingZero { lo: f64, hi: f64 },

    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for failures of the file system or of the container format, as
    /// opposed to failures of the numerical processing.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Error::FileNotFound(_)
                | Error::Io { .. }
                | Error::NotWave(_)
                | Error::UnsupportedFormat(_)
                | Error::MultiChannel(_)
                | Error::Truncated(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
