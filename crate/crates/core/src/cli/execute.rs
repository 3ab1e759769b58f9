use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use super::config::{DensitySource, RunConfig};
use super::validate::run_checks;
use super::CliError;
use crate::codec::{decode, encode, gamma_coeffs, EncodingFile, HarmonicBasis};
use crate::estimator::{density_estimate, EstimatorConfig};
use crate::experiments::{
    ellipse_point, gen_ellipse_dataset, run_biexp, run_ellipse, uniform_circle_dataset, BiexpConfig, EllipseConfig,
    SweepResult,
};
use crate::kernel::{build_kernel, kernel_profile};

/// What a successful invocation reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    /// Printed to standard output.
    pub line: String,
    pub artifacts: Vec<PathBuf>,
    pub exit_code: i32,
}

struct Artifact {
    name: String,
    contents: String,
}

/// Write every artifact through a temporary file in the target directory
/// and rename into place; on failure, remove what was already renamed.
fn write_atomically(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| {
        for a in artifacts {
            let target = dir.join(&a.name);
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| CliError::Io(format!("temporary file in {}: {e}", dir.display())))?;
            tmp.write_all(a.contents.as_bytes())
                .and_then(|_| tmp.as_file().sync_all())
                .map_err(|e| CliError::Io(format!("writing {}: {e}", target.display())))?;
            tmp.persist(&target)
                .map_err(|e| CliError::Io(format!("renaming into {}: {e}", target.display())))?;
            written.push(target);
        }
        Ok(())
    })();
    match result {
        Ok(()) => Ok(written),
        Err(e) => {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            Err(e)
        }
    }
}

fn sidecar(cfg: &RunConfig, extra: serde_json::Value) -> String {
    let config: serde_json::Value = serde_json::from_str(&cfg.canonical_json()).expect("canonical config is JSON");
    let mut v = json!({
        "config": config,
        "config_hash": cfg.hash(),
    });
    if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    let mut s = serde_json::to_string_pretty(&v).expect("sidecar serializes");
    s.push('\n');
    s
}

fn check_degenerate(result: &SweepResult) -> Result<(), CliError> {
    let total = result.per_point.len();
    if result.skipped * 100 > total {
        return Err(CliError::Numerical(format!(
            "{} of {} evaluation points had a degenerate quotient denominator",
            result.skipped, total
        )));
    }
    Ok(())
}

fn sweep_artifacts(cfg: &RunConfig, result: &SweepResult) -> Vec<Artifact> {
    let stem = result.file_stem();
    vec![
        Artifact {
            name: format!("{stem}.csv"),
            contents: result.to_csv(&cfg.hash()),
        },
        Artifact {
            name: format!("{stem}.json"),
            contents: sidecar(
                cfg,
                json!({
                    "evaluated": result.sorted.len(),
                    "skipped": result.skipped,
                    "median_error": result.median(),
                    "median_log10_error": result.median_log10(),
                    "max_error": result.max(),
                }),
            ),
        },
    ]
}

/// Run the configured experiment and write its artifacts.
pub fn execute(cfg: &RunConfig) -> Result<Summary, CliError> {
    let start = Instant::now();
    let hash = cfg.hash();
    let (artifacts, mut line, exit_code) = match cfg {
        RunConfig::Ellipse(p) => {
            let run = EllipseConfig {
                m: p.m,
                n: p.n,
                snr_db: p.snr_db,
                seed: p.seed,
                grid: p.grid,
            };
            let result = run_ellipse(&run)?;
            check_degenerate(&result)?;
            let line = format!("ellipse n={} M={} median_error={:.6e}", p.n, p.m, result.median());
            (sweep_artifacts(cfg, &result), line, 0)
        }
        RunConfig::Biexp(p) => {
            let run = BiexpConfig {
                m: p.m,
                n: p.n,
                snr_db: p.snr_db,
                seed: p.seed,
                test_pairs: p.grid,
            };
            let result = run_biexp(&run)?;
            check_degenerate(&result)?;
            let line = format!("biexp n={} M={} median_combined_error={:.6e}", p.n, p.m, result.median());
            (sweep_artifacts(cfg, &result), line, 0)
        }
        RunConfig::Density(p) => {
            let (data, source) = match p.source {
                DensitySource::Circle => (uniform_circle_dataset(p.m, p.seed)?, "circle"),
                DensitySource::Ellipse => {
                    let e = EllipseConfig {
                        m: p.m,
                        n: p.n,
                        snr_db: None,
                        seed: p.seed,
                        grid: p.grid,
                    };
                    (gen_ellipse_dataset(&e)?.dataset, "ellipse")
                }
            };
            let est = EstimatorConfig::raw(build_kernel(p.n, p.q)?);
            let mut csv = format!("# config_hash={hash}\ntheta,density\n");
            let mut worst: f64 = 0.0;
            for i in 0..p.grid {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / p.grid as f64;
                let x = match p.source {
                    DensitySource::Circle => vec![theta.cos(), theta.sin(), 0.0],
                    DensitySource::Ellipse => ellipse_point(theta).to_vec(),
                };
                let d = density_estimate(&data, &est, &x)?;
                worst = worst.max((d - 1.0).abs());
                csv.push_str(&format!("{theta},{d}\n"));
            }
            let name = format!("density_{}_{}_{}", p.n, p.m, source);
            let artifacts = vec![
                Artifact {
                    name: format!("{name}.csv"),
                    contents: csv,
                },
                Artifact {
                    name: format!("{name}.json"),
                    contents: sidecar(cfg, json!({ "max_abs_deviation_from_one": worst })),
                },
            ];
            let line = format!("density n={} M={} source={source} max|density-1|={worst:.6e}", p.n, p.m);
            (artifacts, line, 0)
        }
        RunConfig::KernelDump(p) => {
            let k = build_kernel(p.n, p.q)?;
            let angles: Vec<f64> = (0..p.grid)
                .map(|i| std::f64::consts::PI * i as f64 / (p.grid - 1) as f64)
                .collect();
            let prof = kernel_profile(&k, &angles)?;
            let mut csv = format!("# config_hash={hash}\ntheta,phi\n");
            for (t, v) in angles.iter().zip(&prof) {
                csv.push_str(&format!("{t},{v}\n"));
            }
            let artifacts = vec![Artifact {
                name: format!("kernel_{}_{}.csv", p.n, p.q),
                contents: csv,
            }];
            let line = format!("kernel-dump n={} q={} rows={} peak={:.6e}", p.n, p.q, p.grid, k.peak());
            (artifacts, line, 0)
        }
        RunConfig::Encode(p) => {
            let e = EllipseConfig {
                m: p.m,
                n: p.n,
                snr_db: p.snr_db,
                seed: p.seed,
                grid: 2,
            };
            let data = gen_ellipse_dataset(&e)?.dataset;
            let l_max = p.l_max.unwrap_or(p.n + 1);
            let enc = encode(&data, &HarmonicBasis::new(l_max), l_max)?;
            let file = EncodingFile::from_encoding(&enc, p.q, p.n);
            let mut contents = serde_json::to_string(&file).map_err(|e| CliError::Numerical(e.to_string()))?;
            contents.push('\n');
            let artifacts = vec![Artifact {
                name: format!("encoding_{}_{}_{}.json", p.n, p.q, p.m),
                contents,
            }];
            let line = format!("encode n={} q={} M={} L={} coefficients={}", p.n, p.q, p.m, l_max, file.coefficients.len());
            (artifacts, line, 0)
        }
        RunConfig::Decode(p) => {
            let text = std::fs::read_to_string(&p.input)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", p.input.display())))?;
            let file: EncodingFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("encoding file {}: {e}", p.input.display())))?;
            let enc = file.to_encoding().map_err(|e| CliError::Config(e.to_string()))?;
            let gamma = gamma_coeffs(file.n, file.q, 2)?;
            let basis = HarmonicBasis::new(file.l_max);
            let mut csv = format!("# config_hash={hash}\ntheta,x1,x2,x3,value\n");
            for i in 0..p.grid {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / p.grid as f64;
                let x = ellipse_point(theta);
                let v = decode(&enc, &gamma, &basis, &x)?;
                csv.push_str(&format!("{theta},{},{},{},{v}\n", x[0], x[1], x[2]));
            }
            let artifacts = vec![Artifact {
                name: format!("decode_{}_{}.csv", file.n, file.q),
                contents: csv,
            }];
            let line = format!("decode n={} q={} L={} rows={}", file.n, file.q, file.l_max, p.grid);
            (artifacts, line, 0)
        }
        RunConfig::Validate(_) => {
            let checks = run_checks()?;
            let mut csv = format!("# config_hash={hash}\ncheck,measured,tolerance,status\n");
            let mut lines = Vec::new();
            let mut all = true;
            for c in &checks {
                let status = if c.passed() { "pass" } else { "FAIL" };
                all &= c.passed();
                csv.push_str(&format!("{},{:e},{:e},{status}\n", c.name, c.measured, c.tolerance));
                lines.push(format!("{status} {} measured={:.3e} tol={:.0e}", c.name, c.measured, c.tolerance));
            }
            lines.push(format!("validate {}/{} checks passed", checks.iter().filter(|c| c.passed()).count(), checks.len()));
            let artifacts = vec![Artifact {
                name: "validate.csv".into(),
                contents: csv,
            }];
            (artifacts, lines.join("\n"), if all { 0 } else { 3 })
        }
    };
    let written = write_atomically(cfg.out_dir(), &artifacts)?;
    line.push_str(&format!(" runtime={:.2}s", start.elapsed().as_secs_f64()));
    Ok(Summary {
        line,
        artifacts: written,
        exit_code,
    })
}
