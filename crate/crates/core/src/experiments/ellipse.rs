//! A piecewise-smooth target on an ellipse lifted to `S²` by inverse
//! stereographic projection. The target has derivative singularities at
//! `θ = ±π/2`.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::{noise::apply_noise_at_snr, run_rng, SweepMeta, SweepResult};
use crate::error::{Error, Result};
use crate::estimator::{estimate_many, EstimatorConfig, LabeledDataset};
use crate::kernel::build_kernel;

/// Semi-axes of the ellipse `(3 cos θ, 6 sin θ)`.
pub const ELLIPSE_AXES: (f64, f64) = (3.0, 6.0);

const SAMPLE_STREAM: &str = "ellipse|positions";

/// `1 + |cos θ|^{1/2} sin(cos θ + sin θ) / 2`.
pub fn ellipse_target(theta: f64) -> f64 {
    let c = theta.cos();
    1.0 + c.abs().sqrt() * (c + theta.sin()).sin() / 2.0
}

/// `(v, 1) / ‖(v, 1)‖`.
pub fn inverse_stereographic(v: [f64; 2]) -> [f64; 3] {
    let r = (v[0] * v[0] + v[1] * v[1] + 1.0).sqrt();
    [v[0] / r, v[1] / r, 1.0 / r]
}

/// Image of the ellipse parameter `θ` on `S²`.
pub fn ellipse_point(theta: f64) -> [f64; 3] {
    inverse_stereographic([ELLIPSE_AXES.0 * theta.cos(), ELLIPSE_AXES.1 * theta.sin()])
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipseConfig {
    pub m: usize,
    pub n: usize,
    pub snr_db: Option<f64>,
    pub seed: u64,
    pub grid: usize,
}

impl EllipseConfig {
    pub fn new(n: usize, m: usize) -> Self {
        Self {
            m,
            n,
            snr_db: None,
            seed: 0,
            grid: 1024,
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
        if self.m < 1 || self.n < 1 || self.grid < 2 {
            return Err(Error::InvalidParameter(format!(
                "ellipse config needs M >= 1, n >= 1, grid >= 2 (got M={}, n={}, grid={})",
                self.m, self.n, self.grid
            )));
        }
        if let Some(s) = self.snr_db {
            if !s.is_finite() {
                return Err(Error::InvalidParameter("snr_db must be finite".into()));
            }
        }
        Ok(())
    }

    /// Canonical description, hashed into the run's noise stream.
    pub fn canonical(&self) -> String {
        format!(
            "ellipse|n={}|M={}|snr={:?}|seed={}|grid={}",
            self.n, self.m, self.snr_db, self.seed, self.grid
        )
    }

    /// Uniform test grid `θ_i = 2πi/grid`.
    pub fn test_thetas(&self) -> Vec<f64> {
        (0..self.grid).map(|i| 2.0 * PI * i as f64 / self.grid as f64).collect()
    }
}

/// Training sample for the ellipse experiment.
#[derive(Debug, Clone)]
pub struct EllipseData {
    pub dataset: LabeledDataset,
    pub thetas: Vec<f64>,
    pub clean_labels: Vec<f64>,
    pub achieved_snr: Option<f64>,
    /// Ground truth as a function of the ellipse parameter.
    pub truth: fn(f64) -> f64,
}

/// `θ_j ~ U[0, 2π)`, `y_j = P(3 cos θ_j, 6 sin θ_j)`, `z_j = f(θ_j) + ε_j`.
pub fn gen_ellipse_dataset(cfg: &EllipseConfig) -> Result<EllipseData> {
    cfg.validate()?;
    // positions come from a stream shared by every run with this seed, so
    // runs that differ only in n, M or noise level see nested samples
    let mut sample_rng = run_rng(cfg.seed, SAMPLE_STREAM);
    let thetas: Vec<f64> = (0..cfg.m).map(|_| sample_rng.random_range(0.0..2.0 * PI)).collect();
    let mut rng = run_rng(cfg.seed, &cfg.canonical());
    let points: Vec<Vec<f64>> = thetas.iter().map(|&t| ellipse_point(t).to_vec()).collect();
    let clean: Vec<f64> = thetas.iter().map(|&t| ellipse_target(t)).collect();
    let (labels, achieved) = match cfg.snr_db {
        Some(target) => {
            let (noisy, got) = apply_noise_at_snr(&clean, target, &mut rng)?;
            (noisy, Some(got))
        }
        None => (clean.clone(), None),
    };
    Ok(EllipseData {
        dataset: LabeledDataset::scalar(points, labels)?,
        thetas,
        clean_labels: clean,
        achieved_snr: achieved,
        truth: ellipse_target,
    })
}

/// `M` points uniform on the unit circle of the `x₁x₂`-plane in `R^3`.
pub fn uniform_circle_dataset(m: usize, seed: u64) -> Result<LabeledDataset> {
    let mut rng = run_rng(seed, "circle|positions");
    let points = (0..m)
        .map(|_| {
            let t: f64 = rng.random_range(0.0..2.0 * PI);
            vec![t.cos(), t.sin(), 0.0]
        })
        .collect();
    LabeledDataset::unlabeled(points)
}

/// Quotient estimate with `Φ_{n,1}` on the test grid; errors `|F_n - f|`.
pub fn run_ellipse(cfg: &EllipseConfig) -> Result<SweepResult> {
    let data = gen_ellipse_dataset(cfg)?;
    let est = EstimatorConfig::quotient(build_kernel(cfg.n, 1)?);
    let thetas = cfg.test_thetas();
    let xs: Vec<Vec<f64>> = thetas.iter().map(|&t| ellipse_point(t).to_vec()).collect();
    let per_point = estimate_many(&data.dataset, &est, &xs)
        .into_iter()
        .zip(&thetas)
        .map(|(r, &t)| match r {
            Ok(v) => Ok((v[0] - ellipse_target(t)).abs()),
            Err(Error::DegenerateDenominator { .. }) => Ok(f64::NAN),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SweepResult::from_errors(
        SweepMeta {
            experiment: "ellipse",
            n: cfg.n,
            m: cfg.m,
            snr_db: cfg.snr_db,
            seed: cfg.seed,
        },
        per_point,
    ))
}

/// Independent runs over a set of configurations (parallel over configs).
pub fn run_ellipse_sweep(cfgs: &[EllipseConfig]) -> Result<Vec<SweepResult>> {
    cfgs.par_iter().map(run_ellipse).collect()
}
