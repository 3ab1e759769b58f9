//! The localized kernel `Φ_{n,q}` and its evaluation by Clenshaw summation.

use crate::error::{Error, Result};
use crate::numerics::{cutoff_eval, volume_ratio, UltrasphericalFamily};

/// `Φ_{n,q}(t) = Σ_{ℓ<n} c_ℓ p_{q,ℓ}(t)` with
/// `c_ℓ = (ω_q/ω_{q-1}) h(ℓ/n) p_{q,ℓ}(1)`.
///
/// The `ℓ = n` term carries `h(1) = 0` and is not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizedKernel {
    n: usize,
    q: usize,
    coeffs: Vec<f64>,
    family: UltrasphericalFamily,
    peak: f64,
}

impl LocalizedKernel {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        build_kernel(n, q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Expansion coefficients `c_0, ..., c_{n-1}`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn family(&self) -> &UltrasphericalFamily {
        &self.family
    }

    /// `Φ(1)`, the kernel maximum.
    pub fn peak(&self) -> f64 {
        self.peak
    }

    /// Same kernel with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut k = self.clone();
        for c in &mut k.coeffs {
            *c *= factor;
        }
        k.peak *= factor;
        k
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::Domain {
                what: "kernel evaluation",
                value: t,
            });
        }
        Ok(self.clenshaw(t))
    }

    /// Evaluation after clamping `t` into `[-1, 1]`; for inner products of
    /// unit vectors that overshoot by rounding.
    #[inline]
    pub fn eval_clamped(&self, t: f64) -> f64 {
        self.clenshaw(t.clamp(-1.0, 1.0))
    }

    fn clenshaw(&self, t: f64) -> f64 {
        let c = &self.coeffs;
        let top = c.len() - 1;
        if top == 0 {
            return c[0] * self.family.seed0();
        }
        // p_{k+1} = (t/a_k) p_k - (a_{k-1}/a_k) p_{k-1}
        let fam = &self.family;
        let mut b1 = 0.0; // b_{k+1}
        let mut b2 = 0.0; // b_{k+2}
        for k in (1..=top).rev() {
            let alpha = t / fam.a(k);
            let beta_next = -fam.a(k) / fam.a(k + 1);
            let bk = c[k] + alpha * b1 + beta_next * b2;
            b2 = b1;
            b1 = bk;
        }
        let p0 = fam.seed0();
        let p1 = t / fam.a(0) * p0;
        let beta1 = -fam.a(0) / fam.a(1);
        c[0] * p0 + b1 * p1 + beta1 * p0 * b2
    }

    /// Term-by-term summation against explicitly evaluated polynomials.
    pub fn eval_naive(&self, t: f64) -> Result<f64> {
        let vals = self.family.eval_batch(self.coeffs.len() - 1, t)?;
        Ok(crate::numerics::neumaier_sum(
            self.coeffs.iter().zip(&vals).map(|(c, p)| c * p),
        ))
    }
}

/// Precompute the coefficients of `Φ_{n,q}`.
pub fn build_kernel(n: usize, q: usize) -> Result<LocalizedKernel> {
    if n == 0 || q == 0 {
        return Err(Error::InvalidParameter(format!(
            "kernel needs n >= 1 and q >= 1 (got n={n}, q={q})"
        )));
    }
    let family = UltrasphericalFamily::new(q, n + 2)?;
    let ratio = volume_ratio(q);
    let coeffs: Vec<f64> = (0..n)
        .map(|l| ratio * cutoff_eval(l as f64 / n as f64) * family.at_one(l))
        .collect();
    let peak = crate::numerics::neumaier_sum(
        coeffs.iter().enumerate().map(|(l, c)| c * family.at_one(l)),
    );
    Ok(LocalizedKernel {
        n,
        q,
        coeffs,
        family,
        peak,
    })
}

pub fn kernel_eval(kernel: &LocalizedKernel, t: f64) -> Result<f64> {
    kernel.eval(t)
}

/// `Φ(cos θ)` for each angle. Angles must be sorted ascending within `[0, π]`.
pub fn kernel_profile(kernel: &LocalizedKernel, angles: &[f64]) -> Result<Vec<f64>> {
    if angles.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("profile angles must be sorted ascending".into()));
    }
    angles
        .iter()
        .map(|&theta| {
            if !(0.0..=std::f64::consts::PI).contains(&theta) {
                return Err(Error::Domain {
                    what: "kernel profile angle",
                    value: theta,
                });
            }
            Ok(kernel.eval_clamped(theta.cos()))
        })
        .collect()
}
