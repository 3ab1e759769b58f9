//! Recovery of the two decay rates of `0.7 e^{-λ₁ j} + 0.3 e^{-λ₂ j}`,
//! `j = 1..=100`, from the sampled curve.
//!
//! Curves are shifted and scaled, then lifted onto `S^{100}` by appending
//! a constant coordinate and normalizing. Noiseless curves lie on a
//! two-dimensional manifold, so the kernel uses `q = 2`.

use rand::Rng;
use rayon::prelude::*;

use super::{noise::apply_noise_at_snr, run_rng, SweepMeta, SweepResult};
use crate::error::{Error, Result};
use crate::estimator::{estimate_many, EstimatorConfig, LabeledDataset};
use crate::kernel::build_kernel;

pub const BIEXP_AMPLITUDES: (f64, f64) = (0.7, 0.3);
pub const BIEXP_LAMBDA1: (f64, f64) = (0.1, 0.7);
pub const BIEXP_LAMBDA2: (f64, f64) = (1.1, 1.7);
pub const BIEXP_SAMPLES: usize = 100;

const EMBED_SCALE: f64 = 1000.0;
const EMBED_SHIFT: [f64; 3] = [380.0, 189.0, 116.0];
const EMBED_LIFT: f64 = 100.0;

const TRAIN_STREAM: &str = "biexp|train-pairs";
const TEST_STREAM: &str = "biexp|test-pairs";

/// `(f(1), ..., f(100))` with `f(j) = c₁ e^{-λ₁ j} + c₂ e^{-λ₂ j}`.
pub fn biexp_signal(lambda1: f64, lambda2: f64) -> Vec<f64> {
    if !(BIEXP_LAMBDA1.0..=BIEXP_LAMBDA1.1).contains(&lambda1)
        || !(BIEXP_LAMBDA2.0..=BIEXP_LAMBDA2.1).contains(&lambda2)
    {
        log::warn!("decay rates ({lambda1}, {lambda2}) outside the training box");
    }
    let (c1, c2) = BIEXP_AMPLITUDES;
    (1..=BIEXP_SAMPLES)
        .map(|j| {
            let j = j as f64;
            c1 * (-lambda1 * j).exp() + c2 * (-lambda2 * j).exp()
        })
        .collect()
}

/// `P(T(ỹ))` with `T(ỹ) = 1000 ỹ - (380, 189, 116, 0, ...)` and
/// `P(v) = (v, 100) / ‖(v, 100)‖`.
pub fn biexp_embed(curve: &[f64]) -> Result<Vec<f64>> {
    if curve.len() != BIEXP_SAMPLES {
        return Err(Error::LengthMismatch {
            expected: BIEXP_SAMPLES,
            got: curve.len(),
        });
    }
    let mut v: Vec<f64> = curve
        .iter()
        .enumerate()
        .map(|(i, &y)| EMBED_SCALE * y - EMBED_SHIFT.get(i).copied().unwrap_or(0.0))
        .collect();
    v.push(EMBED_LIFT);
    let r = crate::numerics::norm(&v);
    for c in &mut v {
        *c /= r;
    }
    Ok(v)
}

/// `100 Σ_j |λ_j,true - λ_j,est| / λ_j,true`, in percent.
pub fn combined_error(truth: (f64, f64), estimate: (f64, f64)) -> Result<f64> {
    if truth.0 == 0.0 {
        return Err(Error::ZeroTrueComponent { index: 0 });
    }
    if truth.1 == 0.0 {
        return Err(Error::ZeroTrueComponent { index: 1 });
    }
    Ok(100.0 * ((truth.0 - estimate.0).abs() / truth.0.abs() + (truth.1 - estimate.1).abs() / truth.1.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiexpConfig {
    pub m: usize,
    pub n: usize,
    pub snr_db: Option<f64>,
    pub seed: u64,
    pub test_pairs: usize,
}

impl BiexpConfig {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            m,
            n,
            snr_db: None,
            seed: 0,
            test_pairs: 512,
        }
    }

    pub fn with_snr(mut self, snr_db: Option<f64>) -> Self {
        self.snr_db = snr_db;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.n < 1 || self.test_pairs < 1 {
            return Err(Error::InvalidParameter(format!(
                "biexp config needs M >= 1, n >= 1, test pairs >= 1 (got M={}, n={}, pairs={})",
                self.m, self.n, self.test_pairs
            )));
        }
        if let Some(s) = self.snr_db {
            if !s.is_finite() {
                return Err(Error::InvalidParameter("snr_db must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn canonical(&self) -> String {
        format!(
            "biexp|n={}|M={}|snr={:?}|seed={}|pairs={}",
            self.n, self.m, self.snr_db, self.seed, self.test_pairs
        )
    }
}

fn draw_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    (
        rng.random_range(BIEXP_LAMBDA1.0..BIEXP_LAMBDA1.1),
        rng.random_range(BIEXP_LAMBDA2.0..BIEXP_LAMBDA2.1),
    )
}

/// Curve for `(λ₁, λ₂)`, noisy at the given per-curve SNR, lifted to the sphere.
fn observe<R: Rng + ?Sized>(pair: (f64, f64), snr_db: Option<f64>, rng: &mut R) -> Result<Vec<f64>> {
    let clean = biexp_signal(pair.0, pair.1);
    let curve = match snr_db {
        Some(target) => apply_noise_at_snr(&clean, target, rng)?.0,
        None => clean,
    };
    biexp_embed(&curve)
}

/// Training set: `M` uniform `(λ₁, λ₂)` pairs drawn from `pairs`, curve
/// noise drawn from `noise`; labels are the pairs.
pub fn gen_biexp_training<R: Rng + ?Sized, S: Rng + ?Sized>(
    cfg: &BiexpConfig,
    pairs: &mut R,
    noise: &mut S,
) -> Result<LabeledDataset> {
    let mut points = Vec::with_capacity(cfg.m);
    let mut labels = Vec::with_capacity(cfg.m);
    for _ in 0..cfg.m {
        let pair = draw_pair(pairs);
        points.push(observe(pair, cfg.snr_db, noise)?);
        labels.push(vec![pair.0, pair.1]);
    }
    LabeledDataset::new(points, labels)
}

/// Train on `M` pairs, estimate `(λ₁, λ₂)` for fresh test pairs with the
/// vector quotient estimator and record combined errors.
pub fn run_biexp(cfg: &BiexpConfig) -> Result<SweepResult> {
    cfg.validate()?;
    // training and test pairs come from streams shared by every run with
    // this seed; only the curve noise depends on the full configuration
    let mut train_rng = run_rng(cfg.seed, TRAIN_STREAM);
    let mut test_rng = run_rng(cfg.seed, TEST_STREAM);
    let mut noise_rng = run_rng(cfg.seed, &cfg.canonical());
    let data = gen_biexp_training(cfg, &mut train_rng, &mut noise_rng)?;
    let mut truths = Vec::with_capacity(cfg.test_pairs);
    let mut xs = Vec::with_capacity(cfg.test_pairs);
    for _ in 0..cfg.test_pairs {
        let pair = draw_pair(&mut test_rng);
        xs.push(observe(pair, cfg.snr_db, &mut noise_rng)?);
        truths.push(pair);
    }
    let est = EstimatorConfig::quotient(build_kernel(cfg.n, 2)?);
    let per_point = estimate_many(&data, &est, &xs)
        .into_iter()
        .zip(&truths)
        .map(|(r, &truth)| match r {
            Ok(v) => combined_error(truth, (v[0], v[1])),
            Err(Error::DegenerateDenominator { .. }) => Ok(f64::NAN),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SweepResult::from_errors(
        SweepMeta {
            experiment: "biexp",
            n: cfg.n,
            m: cfg.m,
            snr_db: cfg.snr_db,
            seed: cfg.seed,
        },
        per_point,
    ))
}

pub fn run_biexp_sweep(cfgs: &[BiexpConfig]) -> Result<Vec<SweepResult>> {
    cfgs.par_iter().map(run_biexp).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::norm;

    #[test]
    fn signal_values() {
        let s = biexp_signal(0.1, 1.1);
        assert_eq!(s.len(), 100);
        let want = 0.7 * (-0.1f64).exp() + 0.3 * (-1.1f64).exp();
        assert!((s[0] - want).abs() < 1e-15);
        assert!((s[0] - 0.733_247).abs() < 1e-6);
        assert!(s.windows(2).all(|w| w[1] < w[0]));
        let single = biexp_signal(0.4, 0.4);
        for (j, v) in single.iter().enumerate() {
            assert!((v - (-0.4 * (j + 1) as f64).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn embedding() {
        let zero = biexp_embed(&[0.0; 100]).unwrap();
        let r = (380f64.powi(2) + 189f64.powi(2) + 116f64.powi(2) + 100f64.powi(2)).sqrt();
        assert!((zero[0] + 380.0 / r).abs() < 1e-15);
        assert!((zero[1] + 189.0 / r).abs() < 1e-15);
        assert!((zero[2] + 116.0 / r).abs() < 1e-15);
        assert!(zero[3..100].iter().all(|&v| v == 0.0));
        assert!((zero[100] - 100.0 / r).abs() < 1e-15);
        let e = biexp_embed(&biexp_signal(0.3, 1.4)).unwrap();
        assert_eq!(e.len(), 101);
        assert!((norm(&e) - 1.0).abs() < 1e-14);
        assert!(e[100] > 0.0);
        assert!(biexp_embed(&[0.0; 99]).is_err());
    }

    #[test]
    fn combined_error_examples() {
        assert_eq!(combined_error((0.5, 1.5), (0.5, 1.5)).unwrap(), 0.0);
        assert!((combined_error((0.5, 1.5), (0.55, 1.5)).unwrap() - 10.0).abs() < 1e-12);
        let lo = combined_error((0.5, 1.5), (0.45, 1.6)).unwrap();
        let hi = combined_error((0.5, 1.5), (0.55, 1.4)).unwrap();
        assert!((lo - hi).abs() < 1e-12);
        assert!(combined_error((0.0, 1.5), (0.1, 1.5)).is_err());
    }

    #[test]
    fn small_run_is_deterministic() {
        let mut cfg = BiexpConfig::new(8, 256).with_snr(Some(40.0));
        cfg.test_pairs = 16;
        let a = run_biexp(&cfg).unwrap();
        let b = run_biexp(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sorted.len() + a.skipped, 16);
    }
}
