//! Invariants checked against independently computed references.

use std::f64::consts::PI;

use sphere_approx::codec::{
    connection_coeffs, encode, gram_matrix, numerical_rank, parsimonious_basis, weighted_gram_matrix, HarmonicBasis,
};
use sphere_approx::kernel::build_kernel;
use sphere_approx::numerics::{ln_gamma, sphere2_rule, UltrasphericalFamily};
use sphere_approx::LabeledDataset;

/// `P_n^{(α,α)}(x)` for all `n ≤ nmax` by the classical three-term recurrence.
fn jacobi_symmetric(alpha: f64, nmax: usize, x: f64) -> Vec<f64> {
    let mut p = vec![1.0, (alpha + 1.0) * x];
    for n in 2..=nmax {
        let n = n as f64;
        let s = 2.0 * n + 2.0 * alpha;
        let a = 2.0 * n * (n + 2.0 * alpha) * (s - 2.0);
        let b = (s - 1.0) * s * (s - 2.0);
        let c = 2.0 * (n + alpha - 1.0).powi(2) * s;
        let k = p.len();
        p.push((b * x * p[k - 1] - c * p[k - 2]) / a);
    }
    p.truncate(nmax + 1);
    p
}

/// `∫ (P_n^{(α,α)})² (1-x²)^α dx`.
fn jacobi_norm(alpha: f64, n: usize) -> f64 {
    if n == 0 && alpha == -0.5 {
        return PI;
    }
    let n = n as f64;
    let ln = (2.0 * alpha + 1.0) * 2f64.ln() + 2.0 * ln_gamma(n + alpha + 1.0)
        - (2.0 * n + 2.0 * alpha + 1.0).ln()
        - ln_gamma(n + 1.0)
        - ln_gamma(n + 2.0 * alpha + 1.0);
    ln.exp()
}

#[test]
fn matches_normalized_jacobi_polynomials() {
    let nmax = 30;
    for q in 1..=5usize {
        let alpha = q as f64 / 2.0 - 1.0;
        let fam = UltrasphericalFamily::new(q, nmax).unwrap();
        let norms: Vec<f64> = (0..=nmax).map(|n| jacobi_norm(alpha, n).sqrt()).collect();
        for i in 0..=100 {
            let x = -1.0 + 2.0 * i as f64 / 100.0;
            let ours = fam.eval_batch(nmax, x).unwrap();
            let reference = jacobi_symmetric(alpha, nmax, x);
            for n in 0..=nmax {
                let want = reference[n] / norms[n];
                assert!((ours[n] - want).abs() <= 1e-9, "q={q} n={n} x={x}: {} vs {want}", ours[n]);
            }
        }
    }
}

#[test]
fn kernel_is_localized() {
    // with the fixed cutoff the first sidelobe at θ = 0.5 is 3.748e-3 of the
    // peak (an independent Legendre-series sum gives the same value), so this
    // bound does not hold
    let k = build_kernel(64, 2).unwrap();
    let peak = k.eval(1.0).unwrap();
    let mut worst = 0.0f64;
    for i in 0..=4000 {
        let theta = 0.5 + (PI - 0.5) * i as f64 / 4000.0;
        worst = worst.max(k.eval(theta.cos()).unwrap().abs() / peak);
    }
    assert!(worst <= 1e-3, "far-field ratio {worst:e}");
}

#[test]
fn off_peak_value_decays_with_degree() {
    let theta0: f64 = 0.4;
    let scaled: Vec<f64> = [16usize, 32, 64, 128]
        .iter()
        .map(|&n| build_kernel(n, 2).unwrap().eval(theta0.cos()).unwrap().abs() / (n * n) as f64)
        .collect();
    for w in scaled.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{scaled:?}");
    }
}

#[test]
fn lipschitz_growth_order() {
    let mut constant = 0.0f64;
    for n in [8usize, 16, 32] {
        let k = build_kernel(n, 2).unwrap();
        let steps = 8000;
        let mut slope = 0.0f64;
        let mut prev = k.eval(1.0).unwrap();
        for i in 1..=steps {
            let theta = PI * i as f64 / steps as f64;
            let cur = k.eval(theta.cos()).unwrap();
            slope = slope.max((cur - prev).abs() / (PI / steps as f64));
            prev = cur;
        }
        constant = constant.max(slope / (n as f64).powi(3));
    }
    assert!(constant <= 10.0, "fitted constant {constant}");
}

#[test]
fn connection_reconstruction_and_parity() {
    let nmax = 24;
    for (d2, d1) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2)] {
        let table = connection_coeffs(d2, d1, nmax).unwrap();
        let f1 = UltrasphericalFamily::new(d1, nmax).unwrap();
        let f2 = UltrasphericalFamily::new(d2, nmax).unwrap();
        for i in 0..=nmax {
            for l in 0..=nmax {
                if (l + i) % 2 == 1 {
                    assert_eq!(table.get(l, i), 0.0, "({d2},{d1}) C({l},{i})");
                }
            }
        }
        for g in 0..=200 {
            let x = -1.0 + 2.0 * g as f64 / 200.0;
            let p1 = f1.eval_batch(nmax, x).unwrap();
            let p2 = f2.eval_batch(nmax, x).unwrap();
            for (i, want) in p1.iter().enumerate() {
                let rebuilt: f64 = (0..=i).map(|l| table.get(l, i) * p2[l]).sum();
                assert!(
                    (rebuilt - want).abs() <= 1e-8 * f1.at_one(i),
                    "({d2},{d1}) i={i} x={x}"
                );
            }
        }
    }
}

fn quadrature_dataset(m_theta: usize, m_phi: usize) -> (LabeledDataset, Vec<f64>) {
    let rule = sphere2_rule(m_theta, m_phi);
    let data = LabeledDataset::unlabeled(rule.points.clone()).unwrap();
    (data, rule.weights)
}

#[test]
fn gram_at_quadrature_nodes_is_identity() {
    let (data, w) = quadrature_dataset(16, 16);
    let l_max = 6;
    let basis = HarmonicBasis::new(l_max);
    let g = weighted_gram_matrix(&data, &w, &basis, l_max).unwrap();
    let count = HarmonicBasis::count(l_max);
    for i in 0..count {
        for j in 0..count {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((g[(i, j)] - want).abs() <= 1e-10, "G[{i},{j}] = {}", g[(i, j)]);
        }
    }
    assert!(weighted_gram_matrix(&data, &w[1..], &basis, l_max).is_err());
}

#[test]
fn encoding_quadrature_weighted_harmonic_gives_unit_vector() {
    let (data, w) = quadrature_dataset(16, 16);
    let l_max = 4;
    let basis = HarmonicBasis::new(l_max);
    let m = data.len() as f64;
    for k0 in 1..=3 {
        let target = HarmonicBasis::flat_index(1, k0);
        let labels = data
            .points()
            .iter()
            .zip(&w)
            .map(|(y, wj)| vec![m * wj * basis.eval_all(l_max, y).unwrap()[target]])
            .collect();
        let enc = encode(&data.with_labels(labels).unwrap(), &basis, l_max).unwrap();
        for (idx, c) in enc.coefficients.iter().enumerate() {
            let want = if idx == target { 1.0 } else { 0.0 };
            assert!((c - want).abs() <= 1e-10, "k0={k0} idx={idx} c={c}");
        }
    }
}

#[test]
fn circle_data_gram_rank_matches_parsimony() {
    // restricted to a circle, degrees < L span trigonometric polynomials of
    // degree L - 1, a space of dimension 2L - 1
    let z: f64 = 0.3;
    let r = (1.0 - z * z).sqrt();
    let points = (0..400)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 400.0;
            vec![r * t.cos(), r * t.sin(), z]
        })
        .collect();
    let data = LabeledDataset::unlabeled(points).unwrap();
    for l_max in [3usize, 5, 7] {
        let basis = HarmonicBasis::new(l_max);
        let g = gram_matrix(&data, &basis, l_max).unwrap();
        let expect = 2 * l_max - 1;
        assert!(expect < HarmonicBasis::count(l_max));
        assert_eq!(numerical_rank(&g, 1e-6), expect, "L={l_max}");
        assert_eq!(parsimonious_basis(&g, 1e-6).len(), expect, "L={l_max}");
    }
}
