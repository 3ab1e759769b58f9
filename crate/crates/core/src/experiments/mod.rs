//! Data generators, noise, error metrics and the two reproduction sweeps
//! (projected ellipse and bi-exponential decay), plus the geodesic check on
//! the projected ellipse.

mod biexp;
mod ellipse;
mod geometry;
mod noise;

pub use biexp::{
    biexp_embed, biexp_signal, combined_error, gen_biexp_training, run_biexp, run_biexp_sweep, BiexpConfig,
    BIEXP_AMPLITUDES, BIEXP_LAMBDA1, BIEXP_LAMBDA2, BIEXP_SAMPLES,
};
pub use ellipse::{
    ellipse_point, ellipse_target, gen_ellipse_dataset, inverse_stereographic, run_ellipse, run_ellipse_sweep,
    uniform_circle_dataset, EllipseConfig, EllipseData,
};
pub use geometry::{geodesic_vs_arccos, GeometryStats};
pub use noise::{apply_noise_at_snr, snr_db};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Hex SHA-256 digest (first 16 hex digits) of a canonical description.
pub fn config_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    hex::encode(&digest[..8])
}

/// RNG stream for one run, derived from the user seed and the run's
/// canonical description so that parallel and serial execution agree.
pub fn run_rng(seed: u64, canonical: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(canonical.as_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Metadata attached to a sweep result.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SweepMeta {
    pub experiment: &'static str,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub snr_db: Option<f64>,
    pub seed: u64,
}

/// Per-point errors of one run, in evaluation order and sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub meta: SweepMeta,
    /// Errors in evaluation order; `NaN` marks a skipped (degenerate) point.
    pub per_point: Vec<f64>,
    /// Nonnegative errors, ascending.
    pub sorted: Vec<f64>,
    /// `log10` of `sorted`.
    pub log10: Vec<f64>,
    /// Points skipped for a degenerate quotient denominator.
    pub skipped: usize,
}

impl SweepResult {
    pub fn from_errors(meta: SweepMeta, per_point: Vec<f64>) -> Self {
        let mut sorted: Vec<f64> = per_point.iter().copied().filter(|e| !e.is_nan()).collect();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let skipped = per_point.len() - sorted.len();
        let log10 = sorted.iter().map(|e| e.log10()).collect();
        Self {
            meta,
            per_point,
            sorted,
            log10,
            skipped,
        }
    }

    pub fn median(&self) -> f64 {
        median_sorted(&self.sorted)
    }

    pub fn median_log10(&self) -> f64 {
        median_sorted(&self.log10)
    }

    pub fn max(&self) -> f64 {
        self.sorted.last().copied().unwrap_or(f64::NAN)
    }

    /// `{experiment}_{n}_{M}_{snr}.csv`, `snr` is `none` when noiseless.
    pub fn file_stem(&self) -> String {
        let snr = match self.meta.snr_db {
            Some(s) => format!("{s}"),
            None => "none".to_string(),
        };
        format!("{}_{}_{}_{}", self.meta.experiment, self.meta.n, self.meta.m, snr)
    }

    /// CSV with a config-hash comment line, a header, then `rank,error,log10_error`.
    pub fn to_csv(&self, config_hash: &str) -> String {
        let mut out = String::with_capacity(32 * self.sorted.len() + 64);
        out.push_str(&format!("# config_hash={config_hash}\n"));
        out.push_str("rank,error,log10_error\n");
        for (i, (e, l)) in self.sorted.iter().zip(&self.log10).enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, e, l));
        }
        out
    }
}

/// Median of an ascending slice (mean of the middle pair for even length).
pub fn median_sorted(v: &[f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Median of an arbitrary slice.
pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    median_sorted(&s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn meta() -> SweepMeta {
        SweepMeta {
            experiment: "ellipse",
            n: 8,
            m: 16,
            snr_db: None,
            seed: 0,
        }
    }

    #[test]
    fn sorting_and_skips() {
        let r = SweepResult::from_errors(meta(), vec![0.1, f64::NAN, 0.001, 1.0]);
        assert_eq!(r.sorted, vec![0.001, 0.1, 1.0]);
        assert_eq!(r.skipped, 1);
        assert!((r.log10[0] + 3.0).abs() < 1e-12);
        assert_eq!(r.median(), 0.1);
        assert_eq!(r.file_stem(), "ellipse_8_16_none");
    }

    #[test]
    fn csv_layout() {
        let r = SweepResult::from_errors(meta(), vec![0.5, 0.25]);
        let csv = r.to_csv("abc");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# config_hash=abc");
        assert_eq!(lines[1], "rank,error,log10_error");
        assert!(lines[2].starts_with("1,0.25,"));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn rng_streams_depend_on_seed_and_config() {
        let a: u64 = run_rng(1, "x").random();
        let b: u64 = run_rng(1, "x").random();
        let c: u64 = run_rng(2, "x").random();
        let d: u64 = run_rng(1, "y").random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
