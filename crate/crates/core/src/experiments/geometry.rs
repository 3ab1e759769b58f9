//! Intrinsic (along-curve) distance versus spherical distance on the
//! projected ellipse.

use std::f64::consts::PI;

use super::ellipse::ellipse_point;
use crate::error::{Error, Result};

/// Paired distances for sampled point pairs on the projected ellipse.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryStats {
    /// `(ρ, arccos(x·y))` with `ρ` the shorter arc length along the curve.
    pub pairs: Vec<(f64, f64)>,
    /// Total length of the closed curve.
    pub curve_length: f64,
}

impl GeometryStats {
    /// `(min, max)` of `arccos(x·y) / ρ` over pairs with `0 < ρ ≤ max_rho`.
    pub fn ratio_range(&self, max_rho: f64) -> (f64, f64) {
        self.pairs
            .iter()
            .filter(|(rho, _)| *rho > 0.0 && *rho <= max_rho)
            .map(|(rho, a)| a / rho)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)))
    }

    /// `max |ρ - arccos| / ρ³` over pairs with `ρ ∈ [lo, hi]`.
    pub fn cubic_constant(&self, lo: f64, hi: f64) -> f64 {
        self.cubic_ratios(lo, hi).fold(0.0, f64::max)
    }

    /// `|ρ - arccos| / ρ³` over pairs with `ρ ∈ [lo, hi]`.
    pub fn cubic_ratios(&self, lo: f64, hi: f64) -> impl Iterator<Item = f64> + '_ {
        self.pairs
            .iter()
            .filter(move |(rho, _)| *rho >= lo && *rho <= hi)
            .map(|(rho, a)| (rho - a).abs() / rho.powi(3))
    }
}

fn sphere_angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
    2.0 * (0.5 * d).min(1.0).asin()
}

/// Sample the projected ellipse at `resolution` equispaced parameters,
/// integrate arc length with great-circle segments, and pair every
/// `base_stride`-th grid point with partners at geometrically spaced
/// offsets of at least `resolution / 1000` steps.
pub fn geodesic_vs_arccos(resolution: usize, base_stride: usize) -> Result<GeometryStats> {
    if resolution < 1000 {
        return Err(Error::InvalidParameter(format!(
            "geodesic grid needs at least 1000 points (got {resolution})"
        )));
    }
    let stride = base_stride.max(1);
    let points: Vec<[f64; 3]> = (0..resolution)
        .map(|i| ellipse_point(2.0 * PI * i as f64 / resolution as f64))
        .collect();
    let mut arc = Vec::with_capacity(resolution + 1);
    arc.push(0.0);
    let mut acc = 0.0;
    for i in 0..resolution {
        acc += sphere_angle(&points[i], &points[(i + 1) % resolution]);
        arc.push(acc);
    }
    let length = acc;

    // pairs closer than a thousandth of the curve are dominated by rounding
    // in the point coordinates, so offsets start there
    let mut offsets = Vec::new();
    let mut off = (resolution / 1000).max(1) as f64;
    while (off as usize) < resolution / 2 {
        let k = off.round() as usize;
        if offsets.last() != Some(&k) {
            offsets.push(k);
        }
        off *= 1.15;
    }

    let mut pairs = Vec::new();
    for i in (0..resolution).step_by(stride) {
        for &k in &offsets {
            let j = (i + k) % resolution;
            let along = if j > i { arc[j] - arc[i] } else { length - arc[i] + arc[j] };
            let rho = along.min(length - along);
            if rho == 0.0 {
                continue;
            }
            pairs.push((rho, sphere_angle(&points[i], &points[j])));
        }
    }
    Ok(GeometryStats {
        pairs,
        curve_length: length,
    })
}
