mod args;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use wavedenoise::experiment::{gated_sine, run_preset};
use wavedenoise::{analyze, enhance, mix_at_snr, read_wav, synth_signal, write_wav, SignalBuffer, SynthKind};

use args::{AnalyzeArgs, Cli, Command, DenoiseArgs, ExperimentArgs, SynthArgs, SynthKindArg, SEED_ENV};

/// Failure classes, one per exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Processing(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Processing(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Processing(m) => f.write_str(m),
        }
    }
}

impl From<wavedenoise::Error> for Failure {
    fn from(e: wavedenoise::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else if matches!(e, wavedenoise::Error::InvalidConfig(_)) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Processing(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

/// `WAVEDENOISE_SEED` wins over any `--seed` flag.
fn resolve_seed(flag: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(std::env::VarError::NotPresent) => Ok(flag),
        Err(e) => Err(Failure::Usage(format!("{SEED_ENV}: {e}"))),
    }
}

fn write_text(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn denoise(args: DenoiseArgs, verbose: bool) -> Outcome {
    let config = args.config.to_config(resolve_seed(args.seed)?);
    config.validate()?;
    let noisy = read_wav(&args.input)?;
    let reference = args.reference.as_deref().map(read_wav).transpose()?;
    let (enhanced, report) = enhance(&noisy, &config, reference.as_ref())?;
    write_wav(&args.out, &enhanced)?;
    if let Some(path) = &args.report {
        write_text(path, &report.to_json()?)?;
    }
    if verbose {
        let unvoiced = report
            .frames
            .iter()
            .filter(|f| f.vuv == wavedenoise::pipeline::Voicing::Unvoiced)
            .count();
        eprintln!(
            "denoise: {} frames ({unvoiced} unvoiced), {} noise frames, method {}",
            report.frames.len(),
            report.noise_frames,
            config.method
        );
        if let (Some(i), Some(o)) = (report.input_snr_db, report.output_snr_db) {
            eprintln!("denoise: input snr {i:.3} dB, output snr {o:.3} dB");
        }
    }
    Ok(())
}

fn analyze_cmd(args: AnalyzeArgs, verbose: bool) -> Outcome {
    let config = args.config.to_config(0);
    config.validate()?;
    let noisy = read_wav(&args.input)?;
    let noise = read_wav(&args.noise)?;
    let report = analyze(&noisy, &noise, &config)?;
    write_text(&args.report, &report.to_json()?)?;
    if verbose {
        eprintln!(
            "analyze: pooled symmetric divergence {:.6} nats over {} subbands",
            report.pooled.symmetric_divergence,
            report.subbands.len()
        );
    }
    Ok(())
}

fn synth(args: SynthArgs, verbose: bool) -> Outcome {
    let seed = resolve_seed(args.seed)?;
    let sine = || gated_sine(args.freq_hz, args.amplitude, args.silence_ms, args.duration_s, args.sample_rate);
    let noise = || {
        synth_signal(
            SynthKind::WhiteNoise {
                std_dev: args.std_dev,
                seed,
            },
            args.duration_s,
            args.sample_rate,
        )
    };
    let signal: SignalBuffer = match args.kind {
        SynthKindArg::Sine => sine()?,
        SynthKindArg::Noise => noise()?,
        SynthKindArg::Mix => mix_at_snr(&sine()?, &noise()?, args.snr_db)?,
    };
    write_wav(&args.out, &signal)?;
    if verbose {
        eprintln!("synth: {} samples at {} Hz", signal.len(), signal.sample_rate_hz());
    }
    Ok(())
}

fn experiment(args: ExperimentArgs, verbose: bool) -> Outcome {
    let seed = resolve_seed(args.seed)?;
    let outcome = run_preset(args.preset, seed, args.method)?;
    if let Some(path) = &args.out {
        write_wav(path, &outcome.enhanced)?;
    }
    if let Some(path) = &args.report {
        write_text(path, &outcome.report.to_json()?)?;
    }
    println!("input_snr_db {:.6}", outcome.input_snr_db());
    println!("output_snr_db {:.6}", outcome.output_snr_db());
    if verbose {
        eprintln!(
            "experiment: {} seed {seed} method {}, improvement {:.3} dB",
            args.preset,
            args.method,
            outcome.improvement_db()
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let verbose = cli.verbose;
    match cli.command {
        Command::Denoise(a) => denoise(a, verbose),
        Command::Analyze(a) => analyze_cmd(a, verbose),
        Command::Synth(a) => synth(a, verbose),
        Command::Experiment(a) => experiment(a, verbose),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("usage error");
            eprintln!("wavedenoise: {}", line.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("wavedenoise: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
