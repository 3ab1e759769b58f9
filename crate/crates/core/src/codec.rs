//! Finite encoding of a labeled sample on `S²` by spherical-harmonic
//! moments, and the decoder that reproduces the one-shot estimator from it.
//!
//! The estimator `(1/M) Σ z_j Φ_{n,q}(x·y_j)` only depends on the data
//! through the moments `ẑ(ℓ,k) = (1/M) Σ_j z_j Y_{ℓ,k}(y_j)`. Rewriting
//! `Φ_{n,q}` in the ambient reproducing kernels gives
//!
//! ```text
//! F_n(x) = Σ_ℓ Γ_ℓ Σ_k ẑ(ℓ,k) Y_{ℓ,k}(x)
//! Γ_ℓ    = (ω_q ω_{Q-1})/(ω_Q ω_{q-1}) Σ_{i≥ℓ} h(i/n) p_{q,i}(1)/p_{Q,ℓ}(1) C_{Q,q}(ℓ,i)
//! ```
//!
//! where `C_{Q,q}` expresses `p_{q,i}` in the `p_{Q,ℓ}` basis.
//!
//! Harmonics are real and orthonormal for the normalized surface measure,
//! so `Y_{0,1} ≡ 1`. Within degree `ℓ` the index `k = 1..=2ℓ+1` runs over
//! orders `m = k - ℓ - 1 = -ℓ..=ℓ`; negative orders carry `sin(|m|φ)`,
//! positive orders `cos(mφ)`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::LabeledDataset;
use crate::numerics::{cutoff_eval, gauss_jacobi_rule, neumaier_sum, ultra_at_one, volume_ratio, UltrasphericalFamily};

/// Real orthonormal harmonics on `S²` of degree `< max_degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarmonicBasis {
    max_degree: usize,
}

impl HarmonicBasis {
    pub fn new(max_degree: usize) -> Self {
        Self { max_degree }
    }

    /// Ambient sphere dimension; only `S²` is supported.
    pub fn sphere_dim(&self) -> usize {
        2
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `dim H_ℓ = 2ℓ + 1`.
    pub fn degree_dim(l: usize) -> usize {
        2 * l + 1
    }

    /// Number of harmonics of degree `< l_max`.
    pub fn count(l_max: usize) -> usize {
        l_max * l_max
    }

    /// Flat index of `(ℓ, k)`, `k` 1-based.
    pub fn flat_index(l: usize, k: usize) -> usize {
        l * l + k - 1
    }

    /// All `Y_{ℓ,k}(x)` with `ℓ < l_max`, in flat order.
    pub fn eval_all(&self, l_max: usize, x: &[f64]) -> Result<Vec<f64>> {
        if l_max > self.max_degree {
            return Err(Error::Shape(format!(
                "degree bound {l_max} exceeds basis maximum {}",
                self.max_degree
            )));
        }
        if x.len() != 3 {
            return Err(Error::LengthMismatch {
                expected: 3,
                got: x.len(),
            });
        }
        Ok(real_harmonics(l_max, x))
    }
}

/// Normalized associated Legendre table `P̄_ℓ^m(z)` for `ℓ < l_max`,
/// scaled so that `√(2-δ_{m0}) P̄_ℓ^m(cos θ) trig(mφ)` is orthonormal for
/// the normalized measure. Indexed `[ℓ][m]`.
fn normalized_legendre(l_max: usize, z: f64, s: f64) -> Vec<Vec<f64>> {
    let mut p = vec![Vec::new(); l_max];
    if l_max == 0 {
        return p;
    }
    for (l, row) in p.iter_mut().enumerate() {
        *row = vec![0.0; l + 1];
    }
    p[0][0] = 1.0;
    for m in 1..l_max {
        let mf = m as f64;
        p[m][m] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[m - 1][m - 1];
    }
    for m in 0..l_max {
        if m + 1 < l_max {
            p[m + 1][m] = (2.0 * m as f64 + 3.0).sqrt() * z * p[m][m];
        }
        for l in (m + 2)..l_max {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            p[l][m] = a * (z * p[l - 1][m] - b * p[l - 2][m]);
        }
    }
    p
}

fn real_harmonics(l_max: usize, x: &[f64]) -> Vec<f64> {
    let z = x[2].clamp(-1.0, 1.0);
    let s = x[0].hypot(x[1]);
    let phi = x[1].atan2(x[0]);
    let leg = normalized_legendre(l_max, z, s);
    let root2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(l_max * l_max);
    for (l, row) in leg.iter().enumerate() {
        let li = l as i64;
        for m in -li..=li {
            let am = m.unsigned_abs() as usize;
            let v = match m.signum() {
                0 => row[0],
                1 => root2 * row[am] * (am as f64 * phi).cos(),
                _ => root2 * row[am] * (am as f64 * phi).sin(),
            };
            out.push(v);
        }
    }
    out
}

/// Moments `ẑ(ℓ,k)` for `ℓ < l_max`, flat `(ℓ, k)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicEncoding {
    pub l_max: usize,
    pub coefficients: Vec<f64>,
    pub sample_count: usize,
}

impl HarmonicEncoding {
    pub fn get(&self, l: usize, k: usize) -> f64 {
        self.coefficients[HarmonicBasis::flat_index(l, k)]
    }
}

/// `C(ℓ, i)` for `0 ≤ ℓ ≤ i ≤ n` with `p_{d1,i} = Σ_ℓ C(ℓ,i) p_{d2,ℓ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionTable {
    pub d2: usize,
    pub d1: usize,
    pub n: usize,
    /// `(n+1) × (n+1)`, row `ℓ`, column `i`; zero below the diagonal and at
    /// mixed parity.
    pub c: DMatrix<f64>,
}

impl ConnectionTable {
    pub fn get(&self, l: usize, i: usize) -> f64 {
        self.c[(l, i)]
    }
}

/// Decoder weights `Γ_{ℓ,n}` for `ℓ = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaTable {
    pub n: usize,
    pub q: usize,
    pub sphere_dim: usize,
    pub values: Vec<f64>,
}

impl GammaTable {
    /// `Γ_{ℓ,n}`, zero for `ℓ > n`.
    pub fn get(&self, l: usize) -> f64 {
        self.values.get(l).copied().unwrap_or(0.0)
    }
}

/// Orthonormal projection of `p_{d1,i}` on `p_{d2,ℓ}` by Gauss–Jacobi
/// quadrature for the `d2` weight with `n + 2` nodes (exact).
pub fn connection_coeffs(d2: usize, d1: usize, n: usize) -> Result<ConnectionTable> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidParameter("connection dimensions must be >= 1".into()));
    }
    let rule = gauss_jacobi_rule(d2, n + 2)?;
    let f1 = UltrasphericalFamily::new(d1, n + 1)?;
    let f2 = UltrasphericalFamily::new(d2, n + 1)?;
    let v1: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| f1.eval_batch(n, x)).collect::<Result<_>>()?;
    let v2: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| f2.eval_batch(n, x)).collect::<Result<_>>()?;
    let mut c = DMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for l in (i % 2..=i).step_by(2) {
            c[(l, i)] = neumaier_sum(
                rule.weights
                    .iter()
                    .enumerate()
                    .map(|(k, w)| w * v1[k][i] * v2[k][l]),
            );
        }
    }
    Ok(ConnectionTable { d2, d1, n, c })
}

/// Decoder weights for kernel `Φ_{n,q}` against the ambient sphere `S^Q`.
pub fn gamma_coeffs(n: usize, q: usize, sphere_dim: usize) -> Result<GammaTable> {
    if q == 0 || q > sphere_dim || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "gamma_coeffs needs n >= 1 and 1 <= q <= Q (got n={n}, q={q}, Q={sphere_dim})"
        )));
    }
    let conn = connection_coeffs(sphere_dim, q, n)?;
    let prefactor = volume_ratio(q) / volume_ratio(sphere_dim);
    let values = (0..=n)
        .map(|l| {
            let inner = neumaier_sum((l..=n).map(|i| {
                cutoff_eval(i as f64 / n as f64) * ultra_at_one(q, i) * conn.get(l, i)
            }));
            prefactor * inner / ultra_at_one(sphere_dim, l)
        })
        .collect();
    Ok(GammaTable {
        n,
        q,
        sphere_dim,
        values,
    })
}

/// `ẑ(ℓ,k) = (1/M) Σ_j z_j Y_{ℓ,k}(y_j)` for `ℓ < l_max`.
pub fn encode(data: &LabeledDataset, basis: &HarmonicBasis, l_max: usize) -> Result<HarmonicEncoding> {
    if data.sphere_dim() != basis.sphere_dim() {
        return Err(Error::Shape(format!(
            "data on S^{} but basis on S^{}",
            data.sphere_dim(),
            basis.sphere_dim()
        )));
    }
    if data.label_width() != 1 {
        return Err(Error::Shape("encoding needs scalar labels".into()));
    }
    let count = HarmonicBasis::count(l_max);
    let mut acc = vec![(0.0f64, 0.0f64); count];
    for (y, z) in data.points().iter().zip(data.labels()) {
        let ys = basis.eval_all(l_max, y)?;
        for (a, v) in acc.iter_mut().zip(ys) {
            let term = z[0] * v;
            let t = a.0 + term;
            a.1 += if a.0.abs() >= term.abs() { (a.0 - t) + term } else { (term - t) + a.0 };
            a.0 = t;
        }
    }
    let m = data.len() as f64;
    Ok(HarmonicEncoding {
        l_max,
        coefficients: acc.into_iter().map(|(s, c)| (s + c) / m).collect(),
        sample_count: data.len(),
    })
}

/// `Σ_ℓ Γ_ℓ Σ_k ẑ(ℓ,k) Y_{ℓ,k}(x)`.
pub fn decode(enc: &HarmonicEncoding, gamma: &GammaTable, basis: &HarmonicBasis, x: &[f64]) -> Result<f64> {
    if enc.coefficients.len() != HarmonicBasis::count(enc.l_max) {
        return Err(Error::Shape("encoding table size does not match its degree bound".into()));
    }
    if gamma.sphere_dim != basis.sphere_dim() {
        return Err(Error::Shape("decoder weights built for a different ambient sphere".into()));
    }
    // Γ_n vanishes, so degrees < n must be present.
    if enc.l_max < gamma.n {
        return Err(Error::Shape(format!(
            "encoding holds degrees < {} but the decoder needs degrees < {}",
            enc.l_max, gamma.n
        )));
    }
    let ys = basis.eval_all(enc.l_max, x)?;
    let mut terms = Vec::with_capacity(ys.len());
    for l in 0..enc.l_max {
        let g = gamma.get(l);
        for k in 1..=HarmonicBasis::degree_dim(l) {
            let idx = HarmonicBasis::flat_index(l, k);
            terms.push(g * enc.coefficients[idx] * ys[idx]);
        }
    }
    Ok(neumaier_sum(terms))
}

/// `G_{ij} = (1/M) Σ_k Y_i(y_k) Y_j(y_k)` over the flat basis of degree `< l_max`.
pub fn gram_matrix(data: &LabeledDataset, basis: &HarmonicBasis, l_max: usize) -> Result<DMatrix<f64>> {
    let w = vec![1.0 / data.len() as f64; data.len()];
    weighted_gram_matrix(data, &w, basis, l_max)
}

/// `G_{ij} = Σ_k w_k Y_i(y_k) Y_j(y_k)`, e.g. with quadrature weights.
pub fn weighted_gram_matrix(
    data: &LabeledDataset,
    weights: &[f64],
    basis: &HarmonicBasis,
    l_max: usize,
) -> Result<DMatrix<f64>> {
    if data.sphere_dim() != basis.sphere_dim() {
        return Err(Error::Shape(format!(
            "data on S^{} but basis on S^{}",
            data.sphere_dim(),
            basis.sphere_dim()
        )));
    }
    if weights.len() != data.len() {
        return Err(Error::LengthMismatch {
            expected: data.len(),
            got: weights.len(),
        });
    }
    let count = HarmonicBasis::count(l_max);
    let mut design = DMatrix::zeros(data.len(), count);
    let mut scaled = DMatrix::zeros(data.len(), count);
    for (row, (y, &w)) in data.points().iter().zip(weights).enumerate() {
        for (col, v) in basis.eval_all(l_max, y)?.into_iter().enumerate() {
            design[(row, col)] = v;
            scaled[(row, col)] = w * v;
        }
    }
    let mut g = design.transpose() * &scaled;
    // exact symmetry
    for i in 0..count {
        for j in 0..i {
            let v = 0.5 * (g[(i, j)] + g[(j, i)]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(g)
}

/// Gram–Schmidt in the `G` inner product, visiting indices in natural
/// `(ℓ, k)` order; an index is kept when its residual squared norm exceeds
/// `threshold · max_i G_ii`.
pub fn parsimonious_basis(g: &DMatrix<f64>, threshold: f64) -> Vec<usize> {
    let n = g.nrows();
    let max_diag = (0..n).map(|i| g[(i, i)]).fold(0.0, f64::max);
    if n == 0 || max_diag <= 0.0 {
        return Vec::new();
    }
    let cutoff = threshold * max_diag;
    let mut kept: Vec<usize> = Vec::new();
    // columns of the partial Cholesky factor, one per kept index
    let mut factor: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let proj: f64 = factor.iter().map(|col| col[i] * col[i]).sum();
        let residual = g[(i, i)] - proj;
        if residual <= cutoff {
            continue;
        }
        let pivot = residual.sqrt();
        let col: Vec<f64> = (0..n)
            .map(|j| {
                let s: f64 = factor.iter().map(|c| c[i] * c[j]).sum();
                (g[(j, i)] - s) / pivot
            })
            .collect();
        factor.push(col);
        kept.push(i);
    }
    kept
}

/// Number of eigenvalues of `G` above `threshold · λ_max`.
pub fn numerical_rank(g: &DMatrix<f64>, threshold: f64) -> usize {
    let eig = SymmetricEigen::new(g.clone());
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    eig.eigenvalues.iter().filter(|&&v| v > threshold * max).count()
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(g: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(g.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// On-disk form of an encoding: `{Q, q, n, L, coefficients}` with the
/// coefficients flattened in `(ℓ ascending, k ascending)` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingFile {
    #[serde(rename = "Q")]
    pub sphere_dim: usize,
    pub q: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub l_max: usize,
    pub coefficients: Vec<f64>,
}

impl EncodingFile {
    pub fn from_encoding(enc: &HarmonicEncoding, q: usize, n: usize) -> Self {
        Self {
            sphere_dim: 2,
            q,
            n,
            l_max: enc.l_max,
            coefficients: enc.coefficients.clone(),
        }
    }

    pub fn to_encoding(&self) -> Result<HarmonicEncoding> {
        if self.sphere_dim != 2 {
            return Err(Error::Shape(format!("encodings are supported on S² only (got Q={})", self.sphere_dim)));
        }
        if self.coefficients.len() != HarmonicBasis::count(self.l_max) {
            return Err(Error::LengthMismatch {
                expected: HarmonicBasis::count(self.l_max),
                got: self.coefficients.len(),
            });
        }
        if self.coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Shape("encoding contains non-finite coefficients".into()));
        }
        Ok(HarmonicEncoding {
            l_max: self.l_max,
            coefficients: self.coefficients.clone(),
            sample_count: 0,
        })
    }
}
