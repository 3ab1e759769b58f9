//! Orthonormal ultraspherical polynomials `p_{q,ℓ}` for the weight
//! `(1-x²)^{q/2-1}` on `[-1, 1]`, and the sphere surface volumes `ω_q`.
//!
//! The family satisfies the symmetric three-term recurrence
//!
//! ```text
//! x p_ℓ(x) = a_ℓ p_{ℓ+1}(x) + a_{ℓ-1} p_{ℓ-1}(x),
//! a_ℓ = sqrt((ℓ+1)(ℓ+q-1) / ((2ℓ+q-1)(2ℓ+q+1))),   a_0 = 1/sqrt(q+1)
//! ```
//!
//! seeded with `p_0 = 2^{(1-q)/2} sqrt(Γ(q)) / Γ(q/2)` and `p_{-1} = 0`.
//! The `ℓ = 0` coefficient is written in its cancelled form so that `q = 1`
//! (Chebyshev, where the raw expression is `0/0`) needs no special branch
//! inside the recurrence. Point evaluation for `q = 1` still uses the closed
//! form `p_{1,ℓ}(cos θ) = sqrt(2/π) cos(ℓθ)`.

use std::f64::consts::{LN_2, PI};

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// Surface volume `ω_q = 2π^{(q+1)/2} / Γ((q+1)/2)` of the unit sphere `S^q`.
pub fn surface_volume(q: usize) -> f64 {
    let h = (q as f64 + 1.0) / 2.0;
    (LN_2 + h * PI.ln() - ln_gamma(h)).exp()
}

/// `ω_q / ω_{q-1} = √π Γ(q/2) / Γ((q+1)/2)` for `q ≥ 1`, without forming
/// either volume.
pub fn volume_ratio(q: usize) -> f64 {
    assert!(q >= 1, "volume_ratio needs q >= 1");
    let qf = q as f64;
    (0.5 * PI.ln() + ln_gamma(qf / 2.0) - ln_gamma((qf + 1.0) / 2.0)).exp()
}

/// `p_{q,0}`, the constant orthonormal polynomial.
pub fn ultra_seed(q: usize) -> f64 {
    let qf = q as f64;
    (0.5 * (1.0 - qf) * LN_2 + 0.5 * ln_gamma(qf) - ln_gamma(qf / 2.0)).exp()
}

/// `p_{q,n}(1)` from its closed form. At `n = 0` the closed form collapses
/// to the seed.
pub fn ultra_at_one(q: usize, n: usize) -> f64 {
    assert!(q >= 1, "ultra_at_one needs q >= 1");
    if n == 0 {
        return ultra_seed(q);
    }
    let qf = q as f64;
    let nf = n as f64;
    let log = 0.5 * (1.0 - qf) * LN_2 - ln_gamma(qf / 2.0)
        + 0.5 * (ln_gamma(nf + qf - 1.0) + (2.0 * nf + qf - 1.0).ln() - ln_gamma(nf + 1.0));
    log.exp()
}

/// Off-diagonal recurrence coefficient `a_ℓ` of the Jacobi matrix.
pub fn recurrence_coeff(q: usize, l: usize) -> f64 {
    let qf = q as f64;
    if l == 0 {
        return 1.0 / (qf + 1.0).sqrt();
    }
    let lf = l as f64;
    ((lf + 1.0) * (lf + qf - 1.0) / ((2.0 * lf + qf - 1.0) * (2.0 * lf + qf + 1.0))).sqrt()
}

/// Cached recurrence data for one dimension parameter `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct UltrasphericalFamily {
    q: usize,
    seed0: f64,
    // a[ℓ] for ℓ = 0..cached_degree
    a: Vec<f64>,
}

impl UltrasphericalFamily {
    /// Build the family with recurrence coefficients cached up to `max_degree`.
    pub fn new(q: usize, max_degree: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("ultraspherical dimension q must be >= 1".into()));
        }
        let a = (0..max_degree).map(|l| recurrence_coeff(q, l)).collect();
        Ok(Self {
            q,
            seed0: ultra_seed(q),
            a,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn seed0(&self) -> f64 {
        self.seed0
    }

    pub fn cached_degree(&self) -> usize {
        self.a.len()
    }

    /// `a_ℓ`, from the cache when available.
    #[inline]
    pub fn a(&self, l: usize) -> f64 {
        match self.a.get(l) {
            Some(&v) => v,
            None => recurrence_coeff(self.q, l),
        }
    }

    /// `p_{q,ℓ}(1)` by the closed form.
    pub fn at_one(&self, l: usize) -> f64 {
        ultra_at_one(self.q, l)
    }

    /// Values `p_{q,0}(t), ..., p_{q,nmax}(t)`.
    pub fn eval_batch(&self, nmax: usize, t: f64) -> Result<Vec<f64>> {
        if !(-1.0..=1.0).contains(&t) {
            return Err(Error::Domain {
                what: "ultraspherical evaluation",
                value: t,
            });
        }
        if self.q == 1 {
            let theta = t.acos();
            let c = (2.0 / PI).sqrt();
            return Ok((0..=nmax)
                .map(|l| if l == 0 { 1.0 / PI.sqrt() } else { c * (l as f64 * theta).cos() })
                .collect());
        }
        Ok(self.recurrence_values(nmax, t))
    }

    /// Upward recurrence without the `q = 1` closed-form shortcut.
    /// Accepts any real `t`; used by quadrature node refinement.
    pub fn recurrence_values(&self, nmax: usize, t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(nmax + 1);
        let mut prev = 0.0;
        let mut cur = self.seed0;
        out.push(cur);
        for l in 0..nmax {
            let back = if l == 0 { 0.0 } else { self.a(l - 1) * prev };
            let next = (t * cur - back) / self.a(l);
            prev = cur;
            cur = next;
            out.push(cur);
        }
        out
    }

    /// `p_{q,ℓ}(t)` and its derivative, by differentiating the recurrence.
    pub fn value_and_derivative(&self, l: usize, t: f64) -> (f64, f64) {
        let (mut p_prev, mut d_prev) = (0.0, 0.0);
        let (mut p, mut d) = (self.seed0, 0.0);
        for k in 0..l {
            let back = if k == 0 { 0.0 } else { self.a(k - 1) };
            let p_next = (t * p - back * p_prev) / self.a(k);
            let d_next = (p + t * d - back * d_prev) / self.a(k);
            p_prev = p;
            d_prev = d;
            p = p_next;
            d = d_next;
        }
        (p, d)
    }
}

/// `p_{q,0}(t), ..., p_{q,nmax}(t)` for a freshly built family.
pub fn ultra_eval_batch(family: &UltrasphericalFamily, nmax: usize, t: f64) -> Result<Vec<f64>> {
    family.eval_batch(nmax, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma::gamma;

    #[test]
    fn volumes() {
        assert!((surface_volume(0) - 2.0).abs() < 1e-14);
        assert!((surface_volume(1) - 2.0 * PI).abs() < 1e-13);
        assert!((surface_volume(2) - 4.0 * PI).abs() < 1e-13);
        assert!((surface_volume(3) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn volume_recursion_agrees() {
        // ω_q = √π Γ(q/2)/Γ(q/2+1/2) ω_{q-1} for q ≥ 2
        for q in 2..40 {
            let qf = q as f64;
            let rec = PI.sqrt() * (ln_gamma(qf / 2.0) - ln_gamma(qf / 2.0 + 0.5)).exp()
                * surface_volume(q - 1);
            let direct = surface_volume(q);
            assert!((rec - direct).abs() <= 1e-12 * direct, "q={q}");
            assert!((volume_ratio(q) - direct / surface_volume(q - 1)).abs() <= 1e-12 * volume_ratio(q));
        }
    }

    #[test]
    fn legendre_and_chebyshev_examples() {
        let f2 = UltrasphericalFamily::new(2, 8).unwrap();
        let v = f2.eval_batch(3, 0.5).unwrap();
        assert!((v[1] - (1.5f64).sqrt() * 0.5).abs() < 1e-14);
        // p_{2,2} = sqrt(5/2) (3t²-1)/2
        assert!((v[2] - (2.5f64).sqrt() * (3.0 * 0.25 - 1.0) / 2.0).abs() < 1e-14);

        let f1 = UltrasphericalFamily::new(1, 8).unwrap();
        let v = f1.eval_batch(3, 1.0).unwrap();
        assert!((v[3] - (2.0 / PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn endpoint_closed_form_examples() {
        assert!((ultra_at_one(2, 1) - 1.5f64.sqrt()).abs() < 1e-14);
        for n in 1..20 {
            assert!((ultra_at_one(1, n) - (2.0 / PI).sqrt()).abs() < 1e-14);
        }
        assert!((ultra_at_one(3, 0) - (2.0 / PI).sqrt()).abs() < 1e-14);
        assert!((ultra_at_one(1, 0) - 1.0 / PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn seed_matches_weight_mass() {
        // p_0² ∫(1-x²)^{q/2-1} dx = 1, ∫ = √π Γ(q/2)/Γ(q/2+1/2)
        for q in 1..12 {
            let qf = q as f64;
            let mass = PI.sqrt() * gamma(qf / 2.0) / gamma(qf / 2.0 + 0.5);
            assert!((ultra_seed(q).powi(2) * mass - 1.0).abs() < 1e-13, "q={q}");
        }
    }

    #[test]
    fn parity_at_minus_one() {
        for q in 1..=5 {
            let fam = UltrasphericalFamily::new(q, 30).unwrap();
            let plus = fam.eval_batch(30, 1.0).unwrap();
            let minus = fam.eval_batch(30, -1.0).unwrap();
            for l in 0..=30 {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!((minus[l] - sign * plus[l]).abs() <= 1e-12 * plus[l].abs().max(1.0));
            }
        }
    }

    #[test]
    fn recurrence_stress_against_chebyshev_closed_form() {
        let fam = UltrasphericalFamily::new(1, 128).unwrap();
        for i in 0..=200 {
            let t = -1.0 + 2.0 * i as f64 / 200.0;
            let rec = fam.recurrence_values(128, t);
            let closed = fam.eval_batch(128, t).unwrap();
            for l in 0..=128 {
                assert!((rec[l] - closed[l]).abs() < 1e-11, "t={t} l={l}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let fam = UltrasphericalFamily::new(3, 20).unwrap();
        let h = 1e-6;
        for &t in &[-0.7, 0.1, 0.55] {
            let (_, d) = fam.value_and_derivative(9, t);
            let fd = (fam.value_and_derivative(9, t + h).0 - fam.value_and_derivative(9, t - h).0) / (2.0 * h);
            assert!((d - fd).abs() < 1e-5 * d.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_outside_interval() {
        let fam = UltrasphericalFamily::new(2, 4).unwrap();
        assert!(matches!(fam.eval_batch(3, 1.0001), Err(Error::Domain { .. })));
        assert!(UltrasphericalFamily::new(0, 4).is_err());
    }
}
