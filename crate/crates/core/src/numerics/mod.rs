//! Special functions and quadrature rules shared by the rest of the crate.

mod cutoff;
mod gamma;
mod quadrature;
mod ultraspherical;

pub use cutoff::{cutoff_eval, CutoffFunction};
pub use gamma::{gamma, ln_gamma};
pub use quadrature::{circle_rule, gauss_jacobi_rule, sphere2_rule, QuadratureRule, SphereRule};
pub use ultraspherical::{
    recurrence_coeff, surface_volume, ultra_at_one, ultra_eval_batch, ultra_seed, volume_ratio,
    UltrasphericalFamily,
};

/// Neumaier-compensated sum. Order-dependent only at the level of the
/// compensated residual.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Euclidean dot product.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(v), 2.0);
        assert_eq!(neumaier_sum(std::iter::empty()), 0.0);
    }
}
