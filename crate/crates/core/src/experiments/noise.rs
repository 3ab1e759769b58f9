use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::norm;

/// `20 log10(‖signal‖ / ‖noise‖)`.
pub fn snr_db(signal: &[f64], noise: &[f64]) -> Result<f64> {
    let nn = norm(noise);
    if nn == 0.0 {
        return Err(Error::ZeroNoise);
    }
    Ok(20.0 * (norm(signal) / nn).log10())
}

/// Add Gaussian noise rescaled so that its norm is exactly
/// `‖values‖ · 10^{-target_db/20}`. Returns the noisy values and the
/// achieved SNR.
pub fn apply_noise_at_snr<R: Rng + ?Sized>(values: &[f64], target_db: f64, rng: &mut R) -> Result<(Vec<f64>, f64)> {
    let signal_norm = norm(values);
    if signal_norm == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let mut noise: Vec<f64> = (0..values.len()).map(|_| rng.sample(StandardNormal)).collect();
    let raw = norm(&noise);
    if raw == 0.0 {
        return Err(Error::ZeroNoise);
    }
    let scale = signal_norm * 10f64.powf(-target_db / 20.0) / raw;
    for v in &mut noise {
        *v *= scale;
    }
    let achieved = snr_db(values, &noise)?;
    let noisy = values.iter().zip(&noise).map(|(a, b)| a + b).collect();
    Ok((noisy, achieved))
}
