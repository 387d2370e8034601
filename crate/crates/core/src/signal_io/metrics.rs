use super::SignalBuffer;
use crate::error::{Error, Result};

/// Value reported by [`snr_db`] when the residual is exactly zero.
pub const SNR_CAP_DB: f64 = 300.0;

/// Returns `clean + alpha * noise` with `alpha` chosen so the clean-to-noise
/// power ratio equals `target_snr_db`. A target of `+inf` yields `clean`.
pub fn mix_at_snr(
    clean: &SignalBuffer,
    noise: &SignalBuffer,
    target_snr_db: f64,
) -> Result<SignalBuffer> {
    clean.check_compatible(noise)?;
    if target_snr_db.is_nan() || target_snr_db == f64::NEG_INFINITY {
        return Err(Error::InvalidSignal(format!(
            "target snr {target_snr_db} dB is not usable"
        )));
    }
    let clean_energy = clean.energy();
    if clean_energy == 0.0 {
        return Err(Error::ZeroPower("clean signal"));
    }
    if target_snr_db == f64::INFINITY {
        return Ok(clean.clone());
    }
    let noise_energy = noise.energy();
    if noise_energy == 0.0 {
        return Err(Error::ZeroPower("noise signal"));
    }
    let alpha = (clean_energy / (noise_energy * 10f64.powf(target_snr_db / 10.0))).sqrt();
    let mixed = clean
        .samples()
        .iter()
        .zip(noise.samples())
        .map(|(c, n)| c + alpha * n)
        .collect();
    SignalBuffer::new(mixed, clean.sample_rate_hz())
}

/// `10 log10(sum ref^2 / sum (ref - test)^2)`, capped at [`SNR_CAP_DB`].
pub fn snr_db(reference: &SignalBuffer, test: &SignalBuffer) -> Result<f64> {
    if reference.len() != test.len() {
        return Err(Error::LengthMismatch {
            left: reference.len(),
            right: test.len(),
        });
    }
    let signal = reference.energy();
    if signal == 0.0 {
        return Err(Error::ZeroPower("reference signal"));
    }
    let residual: f64 = reference
        .samples()
        .iter()
        .zip(test.samples())
        .map(|(r, t)| (r - t) * (r - t))
        .sum();
    if residual == 0.0 {
        return Ok(SNR_CAP_DB);
    }
    Ok((10.0 * (signal / residual).log10()).min(SNR_CAP_DB))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal_io::{synth_signal, SynthKind};

    fn sine(n_s: f64) -> SignalBuffer {
        synth_signal(
            SynthKind::Sine {
                freq_hz: 440.0,
                amplitude: 1.0,
            },
            n_s,
            8000,
        )
        .unwrap()
    }

    fn noise(seed: u64, n_s: f64) -> SignalBuffer {
        synth_signal(SynthKind::WhiteNoise { std_dev: 1.0, seed }, n_s, 8000).unwrap()
    }

    #[test]
    fn equal_power_at_zero_db_adds_unscaled_noise() {
        let clean = SignalBuffer::new(vec![1.0, -1.0, 1.0, -1.0], 8000).unwrap();
        let n = SignalBuffer::new(vec![1.0, 1.0, -1.0, -1.0], 8000).unwrap();
        let mixed = mix_at_snr(&clean, &n, 0.0).unwrap();
        assert_eq!(mixed.samples(), &[2.0, 0.0, 0.0, -2.0]);
    }

    #[test]
    fn infinite_target_returns_clean() {
        let clean = sine(0.1);
        let zero = SignalBuffer::silence(clean.len(), 8000).unwrap();
        assert_eq!(mix_at_snr(&clean, &noise(1, 0.1), f64::INFINITY).unwrap(), clean);
        assert_eq!(mix_at_snr(&clean, &zero, f64::INFINITY).unwrap(), clean);
    }

    #[test]
    fn mixed_snr_hits_target() {
        let clean = sine(1.0);
        let n = noise(3, 1.0);
        for target in [-10.0, 0.0, 3.5, 20.0] {
            let mixed = mix_at_snr(&clean, &n, target).unwrap();
            // independent route: power ratio of clean to the added component
            let added: f64 = mixed
                .samples()
                .iter()
                .zip(clean.samples())
                .map(|(m, c)| (m - c) * (m - c))
                .sum();
            let direct = 10.0 * (clean.energy() / added).log10();
            assert!((direct - target).abs() < 1e-9, "{direct} vs {target}");
            assert!((snr_db(&clean, &mixed).unwrap() - target).abs() < 1e-9);
        }
    }

    #[test]
    fn mix_errors() {
        let clean = sine(0.1);
        let zero = SignalBuffer::silence(clean.len(), 8000).unwrap();
        assert!(matches!(
            mix_at_snr(&clean, &zero, 0.0),
            Err(Error::ZeroPower(_))
        ));
        assert!(matches!(
            mix_at_snr(&zero, &clean, 0.0),
            Err(Error::ZeroPower(_))
        ));
        assert!(matches!(
            mix_at_snr(&clean, &noise(1, 0.2), 0.0),
            Err(Error::LengthMismatch { .. })
        ));
        let other_rate = SignalBuffer::new(clean.samples().to_vec(), 16_000).unwrap();
        assert!(matches!(
            mix_at_snr(&clean, &other_rate, 0.0),
            Err(Error::RateMismatch { .. })
        ));
    }

    #[test]
    fn snr_cap_and_zero_test() {
        let r = sine(0.1);
        assert_eq!(snr_db(&r, &r).unwrap(), SNR_CAP_DB);
        let zero = SignalBuffer::silence(r.len(), 8000).unwrap();
        assert!(snr_db(&r, &zero).unwrap().abs() < 1e-12);
        assert!(matches!(snr_db(&zero, &r), Err(Error::ZeroPower(_))));
        assert!(snr_db(&r, &sine(0.2)).is_err());
    }

    #[test]
    fn snr_matches_power_sum_oracle() {
        let r = synth_signal(
            SynthKind::Sine {
                freq_hz: 440.0,
                amplitude: 1.0,
            },
            1.0,
            8000,
        )
        .unwrap();
        let rms = (r.energy() / r.len() as f64).sqrt();
        let n = noise(11, 1.0);
        let std = 0.1 * rms * 2f64.sqrt();
        let test: Vec<f64> = r
            .samples()
            .iter()
            .zip(n.samples())
            .map(|(a, b)| a + std * b)
            .collect();
        let test = SignalBuffer::new(test, 8000).unwrap();

        let mut ps = 0.0;
        let mut pn = 0.0;
        for (a, b) in r.samples().iter().zip(test.samples()) {
            ps += a * a;
            pn += (b - a) * (b - a);
        }
        let oracle = 10.0 * (ps / pn).log10();
        assert!((snr_db(&r, &test).unwrap() - oracle).abs() < 1e-12);
        // noise std 0.1*sqrt(2)*rms is about 17 dB below the sine
        assert!((oracle - 17.0).abs() < 0.3, "{oracle}");
    }
}
