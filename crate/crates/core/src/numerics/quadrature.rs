//! Quadrature rules used as integration oracles: Gauss–Jacobi for the
//! ultraspherical weight, the equispaced circle rule, and a product rule on
//! `S²`. Rules on spheres are normalized to total mass 1.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use super::neumaier_sum;
use super::ultraspherical::UltrasphericalFamily;
use crate::error::{Error, Result};

/// One-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Highest (trigonometric) polynomial degree integrated exactly.
    pub exactness: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        neumaier_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }

    pub fn total_mass(&self) -> f64 {
        neumaier_sum(self.weights.iter().copied())
    }

    /// Treat the nodes as angles and place them on the unit circle in `R^dim`
    /// (first two coordinates), keeping the weights.
    pub fn on_circle(&self, dim: usize) -> SphereRule {
        assert!(dim >= 2);
        let points = self
            .nodes
            .iter()
            .map(|&theta| {
                let mut p = vec![0.0; dim];
                p[0] = theta.cos();
                p[1] = theta.sin();
                p
            })
            .collect();
        SphereRule {
            points,
            weights: self.weights.clone(),
            exactness: self.exactness,
        }
    }
}

/// Rule whose nodes are points of a sphere (or of a curve on one).
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        neumaier_sum(self.points.iter().zip(&self.weights).map(|(p, &w)| w * f(p)))
    }

    pub fn total_mass(&self) -> f64 {
        neumaier_sum(self.weights.iter().copied())
    }
}

/// `m`-point Gauss rule for the weight `(1-x²)^{q/2-1}` on `[-1, 1]`,
/// exact through degree `2m-1`. Weights carry the full (unnormalized)
/// weight mass.
///
/// Nodes come from the eigenvalues of the symmetric Jacobi matrix, are
/// polished by Newton steps on `p_{q,m}`, and weights use the Christoffel
/// form `1 / Σ_{j<m} p_{q,j}(x)²`. For `q = 1` the Chebyshev closed form
/// is returned directly.
pub fn gauss_jacobi_rule(q: usize, m: usize) -> Result<QuadratureRule> {
    if q == 0 || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "gauss_jacobi_rule needs q >= 1 and m >= 1 (got q={q}, m={m})"
        )));
    }
    let exactness = 2 * m - 1;
    if q == 1 {
        let mut nodes: Vec<f64> = (1..=m)
            .map(|k| ((2 * k - 1) as f64 * PI / (2 * m) as f64).cos())
            .collect();
        nodes.reverse();
        return Ok(QuadratureRule {
            nodes,
            weights: vec![PI / m as f64; m],
            exactness,
        });
    }

    let family = UltrasphericalFamily::new(q, m + 1)?;
    let jacobi = DMatrix::from_fn(m, m, |i, j| {
        if i + 1 == j {
            family.a(i)
        } else if j + 1 == i {
            family.a(j)
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::try_new(jacobi, 1e-15, 10_000).ok_or_else(|| {
        Error::NoConvergence(format!("Jacobi matrix eigensolver, q={q}, m={m}"))
    })?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (p, d) = family.value_and_derivative(m, *x);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let step = p / d;
            *x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        if !x.is_finite() || x.abs() >= 1.0 {
            return Err(Error::NoConvergence(format!(
                "node refinement left [-1, 1], q={q}, m={m}"
            )));
        }
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let vals = family.recurrence_values(m - 1, x);
            1.0 / neumaier_sum(vals.iter().map(|v| v * v))
        })
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        exactness,
    })
}

/// Equispaced angles `2πk/m` with weights `1/m`; exact for trigonometric
/// polynomials of degree `< m` under the normalized circle measure.
pub fn circle_rule(m: usize) -> QuadratureRule {
    assert!(m >= 1, "circle_rule needs m >= 1");
    QuadratureRule {
        nodes: (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect(),
        weights: vec![1.0 / m as f64; m],
        exactness: m - 1,
    }
}

/// Product rule on `S²`: Gauss–Legendre in `cos θ` times equispaced azimuth,
/// normalized to mass 1. Exact for spherical polynomials of degree
/// `< min(2 m_theta, m_phi)`.
pub fn sphere2_rule(m_theta: usize, m_phi: usize) -> SphereRule {
    assert!(m_theta >= 1 && m_phi >= 1, "sphere2_rule needs positive sizes");
    let gl = gauss_jacobi_rule(2, m_theta).expect("Gauss-Legendre nodes");
    let mut points = Vec::with_capacity(m_theta * m_phi);
    let mut weights = Vec::with_capacity(m_theta * m_phi);
    for (&z, &wz) in gl.nodes.iter().zip(&gl.weights) {
        let s = (1.0 - z * z).max(0.0).sqrt();
        for k in 0..m_phi {
            let phi = 2.0 * PI * k as f64 / m_phi as f64;
            points.push(vec![s * phi.cos(), s * phi.sin(), z]);
            weights.push(0.5 * wz / m_phi as f64);
        }
    }
    SphereRule {
        points,
        weights,
        exactness: (2 * m_theta).min(m_phi) - 1,
    }
}
