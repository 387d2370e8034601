use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wavedenoise"));
    cmd.env_remove("WAVEDENOISE_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn schema_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json")
}

fn load_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid_report(path: &Path) -> Value {
    let schema = load_json(&schema_path());
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let report = load_json(path);
    let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", path.display());
    report
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}, stderr {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stderr.is_empty(), "unexpected stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn assert_failure(out: &Output, code: i32) {
    assert_eq!(out.status.code(), Some(code), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.trim_end().lines().count(), 1, "diagnostic: {stderr}");
}

/// Noisy mix with 100 ms of leading noise plus its clean sine.
fn material(dir: &TempDir, seed: u64) -> (PathBuf, PathBuf) {
    let mix = dir.path().join(format!("mix{seed}.wav"));
    let clean = dir.path().join("clean.wav");
    let seed = seed.to_string();
    assert_success(&run(&[
        "synth", "--kind", "mix", "--snr-db", "0", "--seed", &seed, "--silence-ms", "100", "--duration-s", "1",
        "--out", p(&mix),
    ]));
    assert_success(&run(&[
        "synth", "--kind", "sine", "--silence-ms", "100", "--duration-s", "1", "--out", p(&clean),
    ]));
    (mix, clean)
}

#[test]
fn synth_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.wav");
    let b = dir.path().join("b.wav");
    let c = dir.path().join("c.wav");
    for (out, seed) in [(&a, "9"), (&b, "9"), (&c, "10")] {
        assert_success(&run(&["synth", "--kind", "noise", "--seed", seed, "--duration-s", "0.5", "--out", p(out)]));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes.len(), 44 + 2 * 8000);
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_ne!(bytes, std::fs::read(&c).unwrap());
}

#[test]
fn seed_variable_overrides_flag() {
    let dir = TempDir::new().unwrap();
    let flag = dir.path().join("flag.wav");
    let env = dir.path().join("env.wav");
    assert_success(&run(&["synth", "--kind", "noise", "--seed", "7", "--duration-s", "0.1", "--out", p(&flag)]));
    let out = bin()
        .env("WAVEDENOISE_SEED", "7")
        .args(["synth", "--kind", "noise", "--seed", "1", "--duration-s", "0.1", "--out", p(&env)])
        .output()
        .unwrap();
    assert_success(&out);
    assert_eq!(std::fs::read(&flag).unwrap(), std::fs::read(&env).unwrap());

    let bad = bin()
        .env("WAVEDENOISE_SEED", "seven")
        .args(["synth", "--kind", "noise", "--out", p(&env)])
        .output()
        .unwrap();
    assert_failure(&bad, 1);
}

#[test]
fn analyze_against_itself_has_zero_divergence() {
    let dir = TempDir::new().unwrap();
    let (mix, _) = material(&dir, 1);
    let report = dir.path().join("analysis.json");
    assert_success(&run(&["analyze", "--in", p(&mix), "--noise", p(&mix), "--report", p(&report)]));
    let json = assert_valid_report(&report);
    assert_eq!(json["kind"], "analysis");
    let subbands = json["subbands"].as_array().unwrap();
    assert_eq!(subbands.len(), 16);
    for s in subbands {
        assert!(s["symmetric_divergence"].as_f64().unwrap().abs() <= 1e-9);
    }
    assert!(json["pooled"]["symmetric_divergence"].as_f64().unwrap().abs() <= 1e-9);
}

#[test]
fn analyze_separates_noise_levels() {
    let dir = TempDir::new().unwrap();
    let (mix, _) = material(&dir, 2);
    let quiet = dir.path().join("quiet.wav");
    assert_success(&run(&[
        "synth", "--kind", "noise", "--std-dev", "0.01", "--seed", "3", "--duration-s", "1", "--out", p(&quiet),
    ]));
    let report = dir.path().join("analysis.json");
    assert_success(&run(&["analyze", "--in", p(&mix), "--noise", p(&quiet), "--report", p(&report)]));
    let json = assert_valid_report(&report);
    assert!(json["pooled"]["symmetric_divergence"].as_f64().unwrap() > 0.1);
}

#[test]
fn denoise_writes_audio_and_valid_reports() {
    let dir = TempDir::new().unwrap();
    let (mix, clean) = material(&dir, 4);
    for method in ["universal-hard", "universal-soft", "band"] {
        let out = dir.path().join(format!("{method}.wav"));
        let report = dir.path().join(format!("{method}.json"));
        assert_success(&run(&[
            "denoise", "--in", p(&mix), "--out", p(&out), "--ref", p(&clean), "--method", method, "--report",
            p(&report),
        ]));
        assert_eq!(std::fs::metadata(&out).unwrap().len(), std::fs::metadata(&mix).unwrap().len());
        let json = assert_valid_report(&report);
        assert_eq!(json["config"]["method"], method);
        let input = json["input_snr_db"].as_f64().unwrap();
        let output = json["output_snr_db"].as_f64().unwrap();
        assert!(output > input, "{method}: {input} -> {output}");
    }

    // without a reference the SNR fields are absent
    let out = dir.path().join("noref.wav");
    let report = dir.path().join("noref.json");
    assert_success(&run(&["denoise", "--in", p(&mix), "--out", p(&out), "--report", p(&report), "--no-vuv"]));
    let json = assert_valid_report(&report);
    assert!(json.get("input_snr_db").is_none());
    assert!(json["frames"]
        .as_array()
        .unwrap()
        .iter()
        .all(|f| f["vuv"] == "voiced"));
}

#[test]
fn denoise_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let (mix, _) = material(&dir, 5);
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("out{i}.wav"));
        let report = dir.path().join(format!("out{i}.json"));
        assert_success(&run(&[
            "denoise", "--in", p(&mix), "--out", p(&out), "--report", p(&report), "--method", "band", "--seed", "3",
        ]));
        outputs.push((std::fs::read(&out).unwrap(), std::fs::read(&report).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn experiment_prints_improving_snr() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("experiment.json");
    let wav = dir.path().join("enhanced.wav");
    let out = run(&["experiment", "--preset", "sine-0db", "--seed", "3", "--report", p(&report), "--out", p(&wav)]);
    assert_success(&out);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = |key: &str| -> f64 {
        stdout
            .lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    let input = value("input_snr_db");
    let output = value("output_snr_db");
    assert!(output > input);
    let json = assert_valid_report(&report);
    assert_eq!(json["seed"], 3);
    assert!(json["output_snr_db"].as_f64().unwrap() > json["input_snr_db"].as_f64().unwrap());
    assert_eq!(std::fs::read(&wav).unwrap().len(), 44 + 2 * 80_000);
}

#[test]
fn verbose_summary_goes_to_stderr() {
    let out = run(&["experiment", "--seed", "1", "--verbose"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("improvement"));
}

#[test]
fn exit_statuses() {
    let dir = TempDir::new().unwrap();
    let (mix, clean) = material(&dir, 6);
    let out = dir.path().join("out.wav");
    let text = dir.path().join("text.wav");
    std::fs::write(&text, b"definitely not audio").unwrap();

    // usage
    assert_failure(&run(&[]), 1);
    assert_failure(&run(&["transmogrify"]), 1);
    assert_failure(&run(&["denoise", "--in", p(&mix)]), 1);
    assert_failure(&run(&["denoise", "--in", p(&mix), "--out", p(&out), "--method", "median"]), 1);
    assert_failure(&run(&["denoise", "--in", p(&mix), "--out", p(&out), "--hop", "100"]), 1);
    assert_failure(&run(&["experiment", "--preset", "pink-noise"]), 1);

    // i/o
    let missing = dir.path().join("missing.wav");
    assert_failure(&run(&["denoise", "--in", p(&missing), "--out", p(&out)]), 2);
    assert_failure(&run(&["denoise", "--in", p(&text), "--out", p(&out)]), 2);
    let unwritable = dir.path().join("no/such/dir/out.wav");
    assert_failure(&run(&["denoise", "--in", p(&mix), "--out", p(&unwritable)]), 2);

    // processing
    assert_failure(
        &run(&["denoise", "--in", p(&mix), "--out", p(&out), "--silence-ms", "2000"]),
        3,
    );
    let short = dir.path().join("short.wav");
    assert_success(&run(&["synth", "--kind", "sine", "--duration-s", "0.5", "--out", p(&short)]));
    assert_failure(&run(&["denoise", "--in", p(&mix), "--out", p(&out), "--ref", p(&short)]), 3);
    assert_failure(&run(&["synth", "--kind", "mix", "--amplitude", "0", "--out", p(&out)]), 3);
    assert!(clean.exists());

    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}
