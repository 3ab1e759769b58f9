//! One-shot estimators built directly from a labeled sample.
//!
//! - [`f_hat`]: `(1/M) Σ z_j Φ(x·y_j)`, an estimate of `f·f₀` where `f₀` is
//!   the sampling density.
//! - [`density_estimate`]: `|(1/M) Σ Φ(x·y_j)|`, an estimate of `f₀`.
//! - [`quotient_estimate`]: `Σ z_j Φ(x·y_j) / Σ Φ(x·y_j)`, an estimate of
//!   `f` itself that does not need `f₀`.
//! - [`integral_operator`]: the quadrature image of the continuous
//!   reconstruction operator, used as a noise-free reference.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::LocalizedKernel;
use crate::numerics::{dot, norm, SphereRule};

const UNIT_TOL: f64 = 1e-9;

/// Points `y_j` on `S^Q` (stored in `R^{Q+1}`) with label vectors `z_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    points: Vec<Vec<f64>>,
    labels: Vec<Vec<f64>>,
    ambient: usize,
    width: usize,
}

impl LabeledDataset {
    pub fn new(points: Vec<Vec<f64>>, labels: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("dataset needs at least one point".into()));
        }
        if points.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                got: labels.len(),
            });
        }
        let ambient = points[0].len();
        if ambient < 2 {
            return Err(Error::Shape("points must live in R^{Q+1} with Q >= 1".into()));
        }
        let width = labels[0].len();
        if width == 0 {
            return Err(Error::Shape("labels must have width >= 1".into()));
        }
        for p in &points {
            if p.len() != ambient {
                return Err(Error::LengthMismatch {
                    expected: ambient,
                    got: p.len(),
                });
            }
            check_unit(p)?;
        }
        if let Some(z) = labels.iter().find(|z| z.len() != width) {
            return Err(Error::LengthMismatch {
                expected: width,
                got: z.len(),
            });
        }
        Ok(Self {
            points,
            labels,
            ambient,
            width,
        })
    }

    /// Dataset with scalar labels.
    pub fn scalar(points: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        Self::new(points, labels.into_iter().map(|z| vec![z]).collect())
    }

    /// Dataset with every label equal to 1, for density estimation.
    pub fn unlabeled(points: Vec<Vec<f64>>) -> Result<Self> {
        let m = points.len();
        Self::scalar(points, vec![1.0; m])
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> &[Vec<f64>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ambient sphere dimension `Q` (points have `Q + 1` coordinates).
    pub fn sphere_dim(&self) -> usize {
        self.ambient - 1
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient
    }

    pub fn label_width(&self) -> usize {
        self.width
    }

    /// Same points, labels replaced.
    pub fn with_labels(&self, labels: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(self.points.clone(), labels)
    }
}

fn check_unit(x: &[f64]) -> Result<()> {
    let n = norm(x);
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm: n });
    }
    Ok(())
}

/// Kernel plus the choice between the raw sum and the quotient form.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub kernel: LocalizedKernel,
    pub normalize: bool,
}

impl EstimatorConfig {
    pub fn raw(kernel: LocalizedKernel) -> Self {
        Self {
            kernel,
            normalize: false,
        }
    }

    pub fn quotient(kernel: LocalizedKernel) -> Self {
        Self {
            kernel,
            normalize: true,
        }
    }

    fn mode(&self) -> &'static str {
        if self.normalize {
            "quotient"
        } else {
            "raw"
        }
    }
}

/// Compensated accumulator (Neumaier).
#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    sum: f64,
    comp: f64,
}

impl Acc {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `(Σ_j z_j Φ(x·y_j), Σ_j Φ(x·y_j))`, sequential in `j`.
fn kernel_sums(data: &LabeledDataset, kernel: &LocalizedKernel, x: &[f64]) -> Result<(Vec<f64>, f64)> {
    if x.len() != data.ambient {
        return Err(Error::LengthMismatch {
            expected: data.ambient,
            got: x.len(),
        });
    }
    check_unit(x)?;
    let mut num = vec![Acc::default(); data.width];
    let mut den = Acc::default();
    for (y, z) in data.points.iter().zip(&data.labels) {
        let phi = kernel.eval_clamped(dot(x, y));
        den.add(phi);
        for (acc, zk) in num.iter_mut().zip(z) {
            acc.add(zk * phi);
        }
    }
    Ok((num.iter().map(Acc::value).collect(), den.value()))
}

/// `F_n(D; x) = (1/M) Σ_j z_j Φ_{n,q}(x·y_j)`, componentwise.
pub fn f_hat(data: &LabeledDataset, cfg: &EstimatorConfig, x: &[f64]) -> Result<Vec<f64>> {
    if cfg.normalize {
        return Err(Error::WrongMode {
            configured: cfg.mode(),
            requested: "raw",
        });
    }
    let (num, _) = kernel_sums(data, &cfg.kernel, x)?;
    let m = data.len() as f64;
    Ok(num.into_iter().map(|v| v / m).collect())
}

/// `|(1/M) Σ_j Φ_{n,q}(x·y_j)|`. Labels are ignored.
pub fn density_estimate(data: &LabeledDataset, cfg: &EstimatorConfig, x: &[f64]) -> Result<f64> {
    if cfg.normalize {
        return Err(Error::WrongMode {
            configured: cfg.mode(),
            requested: "density",
        });
    }
    let (_, den) = kernel_sums(data, &cfg.kernel, x)?;
    Ok((den / data.len() as f64).abs())
}

/// Threshold below which the quotient denominator counts as degenerate:
/// `1e-8 · M · Φ(1)`.
pub fn degenerate_threshold(data: &LabeledDataset, kernel: &LocalizedKernel) -> f64 {
    1e-8 * data.len() as f64 * kernel.peak()
}

/// `Σ_j z_j Φ(x·y_j) / Σ_j Φ(x·y_j)`. The denominator is signed.
pub fn quotient_estimate(data: &LabeledDataset, cfg: &EstimatorConfig, x: &[f64]) -> Result<Vec<f64>> {
    if !cfg.normalize {
        return Err(Error::WrongMode {
            configured: cfg.mode(),
            requested: "quotient",
        });
    }
    let (num, den) = kernel_sums(data, &cfg.kernel, x)?;
    let threshold = degenerate_threshold(data, &cfg.kernel);
    if den.abs() < threshold {
        return Err(Error::DegenerateDenominator { value: den, threshold });
    }
    Ok(num.into_iter().map(|v| v / den).collect())
}

/// Evaluate the configured estimator (raw or quotient) at many points in
/// parallel. Each point is summed sequentially, so results do not depend on
/// the thread count.
pub fn estimate_many(
    data: &LabeledDataset,
    cfg: &EstimatorConfig,
    xs: &[Vec<f64>],
) -> Vec<Result<Vec<f64>>> {
    xs.par_iter()
        .map(|x| {
            if cfg.normalize {
                quotient_estimate(data, cfg, x)
            } else {
                f_hat(data, cfg, x)
            }
        })
        .collect()
}

/// `Σ_k w_k Φ(x·y_k) f(y_k)` over a mass-one rule.
pub fn integral_operator(
    values: &[f64],
    rule: &SphereRule,
    kernel: &LocalizedKernel,
    x: &[f64],
) -> Result<f64> {
    if values.len() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            got: values.len(),
        });
    }
    let mut acc = Acc::default();
    for ((y, &w), &f) in rule.points.iter().zip(&rule.weights).zip(values) {
        if y.len() != x.len() {
            return Err(Error::LengthMismatch {
                expected: y.len(),
                got: x.len(),
            });
        }
        acc.add(w * kernel.eval_clamped(dot(x, y)) * f);
    }
    Ok(acc.value())
}

/// Largest absolute componentwise difference.
pub fn sup_error(estimates: &[f64], truth: &[f64]) -> Result<f64> {
    if estimates.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            got: estimates.len(),
        });
    }
    Ok(estimates
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
