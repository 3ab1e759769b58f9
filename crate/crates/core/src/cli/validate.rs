//! Invariant checks run by the `validate` subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codec::{decode, encode, gamma_coeffs, HarmonicBasis};
use crate::error::Result;
use crate::estimator::{f_hat, integral_operator, EstimatorConfig, LabeledDataset};
use crate::kernel::build_kernel;
use crate::numerics::{circle_rule, gauss_jacobi_rule, neumaier_sum, sphere2_rule, ultra_at_one, UltrasphericalFamily};

/// Outcome of one check: the measured worst deviation against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.measured.is_finite() && self.measured <= self.tolerance
    }
}

fn orthonormality() -> Result<f64> {
    let mut worst = 0.0f64;
    for q in 1..=4 {
        let rule = gauss_jacobi_rule(q, 64)?;
        let fam = UltrasphericalFamily::new(q, 41)?;
        let vals: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| fam.eval_batch(40, x)).collect::<Result<_>>()?;
        for m in 0..=40 {
            for n in 0..=m {
                let g = neumaier_sum(rule.weights.iter().zip(&vals).map(|(w, v)| w * v[m] * v[n]));
                let want = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((g - want).abs());
            }
        }
    }
    Ok(worst)
}

fn endpoint_closed_form() -> Result<f64> {
    let mut worst = 0.0f64;
    for q in 2..=4 {
        let fam = UltrasphericalFamily::new(q, 61)?;
        let vals = fam.eval_batch(60, 1.0)?;
        for (n, v) in vals.iter().enumerate() {
            let c = ultra_at_one(q, n);
            worst = worst.max((c - v).abs() / c);
        }
    }
    Ok(worst)
}

fn kernel_normalization() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [4, 8, 16, 32] {
        let k1 = build_kernel(n, 1)?;
        let circle = circle_rule(2 * n).on_circle(2);
        let x1 = [0.6, 0.8];
        let v = integral_operator(&vec![1.0; circle.len()], &circle, &k1, &x1)?;
        worst = worst.max((v - 1.0).abs());

        let k2 = build_kernel(n, 2)?;
        let sphere = sphere2_rule(2 * n, 4 * n);
        let x2 = [0.48, 0.6, 0.64];
        let v = integral_operator(&vec![1.0; sphere.len()], &sphere, &k2, &x2)?;
        worst = worst.max((v - 1.0).abs());
    }
    Ok(worst)
}

fn circle_reproduction() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [8usize, 16, 32] {
        let k = build_kernel(n, 1)?;
        let rule = circle_rule(4 * n);
        let pts = rule.on_circle(2);
        for deg in 0..=n / 2 {
            for phase in [0.0, std::f64::consts::FRAC_PI_2] {
                let f = |t: f64| (deg as f64 * t - phase).cos();
                let vals: Vec<f64> = rule.nodes.iter().map(|&t| f(t)).collect();
                for i in 0..16 {
                    let a = 0.41 * i as f64;
                    let got = integral_operator(&vals, &pts, &k, &[a.cos(), a.sin()])?;
                    worst = worst.max((got - f(a)).abs());
                }
            }
        }
    }
    Ok(worst)
}

fn codec_round_trip() -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut unit = move || {
        let v: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        (vec![v[0] / r, v[1] / r, v[2] / r], v[0] + 2.0 * v[1])
    };
    let mut worst = 0.0f64;
    for q in [1, 2] {
        for n in [4, 8, 16] {
            let (points, labels): (Vec<_>, Vec<_>) = (0..64).map(|_| unit()).unzip();
            let data = LabeledDataset::scalar(points, labels)?;
            let basis = HarmonicBasis::new(n + 1);
            let enc = encode(&data, &basis, n + 1)?;
            let gamma = gamma_coeffs(n, q, 2)?;
            let cfg = EstimatorConfig::raw(build_kernel(n, q)?);
            let xs: Vec<Vec<f64>> = (0..64).map(|_| unit().0).collect();
            let direct: Vec<f64> = xs.iter().map(|x| f_hat(&data, &cfg, x).map(|v| v[0])).collect::<Result<_>>()?;
            let scale = direct.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            for (x, d) in xs.iter().zip(&direct) {
                let dec = decode(&enc, &gamma, &basis, x)?;
                worst = worst.max((dec - d).abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// Run the full check list.
pub fn run_checks() -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        CheckOutcome {
            name: "orthonormality",
            measured: orthonormality()?,
            tolerance: 1e-8,
        },
        CheckOutcome {
            name: "endpoint_closed_form",
            measured: endpoint_closed_form()?,
            tolerance: 1e-10,
        },
        CheckOutcome {
            name: "kernel_normalization",
            measured: kernel_normalization()?,
            tolerance: 1e-10,
        },
        CheckOutcome {
            name: "circle_reproduction",
            measured: circle_reproduction()?,
            tolerance: 1e-9,
        },
        CheckOutcome {
            name: "codec_round_trip",
            measured: codec_round_trip()?,
            tolerance: 1e-6,
        },
    ])
}
