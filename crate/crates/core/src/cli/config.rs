//! Run configuration: a JSON parameter block per experiment, with command
//! line flags overriding file values. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Ellipse,
    Biexp,
    Density,
    KernelDump,
    Encode,
    Decode,
    Validate,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Ellipse => "ellipse",
            Experiment::Biexp => "biexp",
            Experiment::Density => "density",
            Experiment::KernelDump => "kernel-dump",
            Experiment::Encode => "encode",
            Experiment::Decode => "decode",
            Experiment::Validate => "validate",
        }
    }
}

fn default_seed() -> u64 {
    0
}
fn default_grid_ellipse() -> usize {
    1024
}
fn default_pairs() -> usize {
    512
}
fn default_grid_kernel() -> usize {
    2048
}
fn default_q_one() -> usize {
    1
}
fn default_out_dir() -> PathBuf {
    PathBuf::from(".")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllipseParams {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(default)]
    pub snr_db: Option<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_grid_ellipse")]
    pub grid: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiexpParams {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(default)]
    pub snr_db: Option<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Number of fresh test pairs.
    #[serde(default = "default_pairs")]
    pub grid: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensitySource {
    /// Uniform samples on a great circle of `S²`.
    Circle,
    /// Uniform-parameter samples on the projected ellipse.
    Ellipse,
}

fn default_source() -> DensitySource {
    DensitySource::Circle
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityParams {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(default = "default_q_one")]
    pub q: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_grid_ellipse")]
    pub grid: usize,
    #[serde(default = "default_source")]
    pub source: DensitySource,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDumpParams {
    pub n: usize,
    pub q: usize,
    #[serde(default = "default_grid_kernel")]
    pub grid: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodeParams {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(default = "default_q_one")]
    pub q: usize,
    /// Degree bound of the encoding; defaults to `n + 1`.
    #[serde(default, rename = "L")]
    pub l_max: Option<usize>,
    #[serde(default)]
    pub snr_db: Option<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecodeParams {
    pub input: PathBuf,
    #[serde(default = "default_grid_ellipse")]
    pub grid: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateParams {
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

/// A validated configuration for one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum RunConfig {
    Ellipse(EllipseParams),
    Biexp(BiexpParams),
    Density(DensityParams),
    KernelDump(KernelDumpParams),
    Encode(EncodeParams),
    Decode(DecodeParams),
    Validate(ValidateParams),
}

/// Command-line overrides; `None` leaves the file value (or default) alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub q: Option<usize>,
    pub snr_db: Option<f64>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn experiment(&self) -> Experiment {
        match self {
            RunConfig::Ellipse(_) => Experiment::Ellipse,
            RunConfig::Biexp(_) => Experiment::Biexp,
            RunConfig::Density(_) => Experiment::Density,
            RunConfig::KernelDump(_) => Experiment::KernelDump,
            RunConfig::Encode(_) => Experiment::Encode,
            RunConfig::Decode(_) => Experiment::Decode,
            RunConfig::Validate(_) => Experiment::Validate,
        }
    }

    pub fn out_dir(&self) -> &Path {
        match self {
            RunConfig::Ellipse(p) => &p.out_dir,
            RunConfig::Biexp(p) => &p.out_dir,
            RunConfig::Density(p) => &p.out_dir,
            RunConfig::KernelDump(p) => &p.out_dir,
            RunConfig::Encode(p) => &p.out_dir,
            RunConfig::Decode(p) => &p.out_dir,
            RunConfig::Validate(p) => &p.out_dir,
        }
    }

    /// Canonical JSON of the parameters (output directory excluded).
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Value::Object(map) = &mut v {
            map.remove("out_dir");
        }
        serde_json::to_string(&v).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        crate::experiments::config_hash(&self.canonical_json())
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let snr_ok = |s: &Option<f64>| s.is_none_or(f64::is_finite);
        match self {
            RunConfig::Ellipse(p) => {
                if p.n < 1 || p.m < 1 || p.grid < 2 || !snr_ok(&p.snr_db) {
                    return bad(format!("ellipse needs n >= 1, M >= 1, grid >= 2, finite snr_db (got n={}, M={}, grid={})", p.n, p.m, p.grid));
                }
            }
            RunConfig::Biexp(p) => {
                if p.n < 1 || p.m < 1 || p.grid < 1 || !snr_ok(&p.snr_db) {
                    return bad(format!("biexp needs n >= 1, M >= 1, grid >= 1, finite snr_db (got n={}, M={}, grid={})", p.n, p.m, p.grid));
                }
            }
            RunConfig::Density(p) => {
                if p.n < 1 || p.m < 1 || p.grid < 2 || p.q < 1 {
                    return bad(format!("density needs n >= 1, M >= 1, q >= 1, grid >= 2 (got n={}, M={}, q={}, grid={})", p.n, p.m, p.q, p.grid));
                }
            }
            RunConfig::KernelDump(p) => {
                if p.n < 1 || p.q < 1 || p.grid < 2 {
                    return bad(format!("kernel-dump needs n >= 1, q >= 1, grid >= 2 (got n={}, q={}, grid={})", p.n, p.q, p.grid));
                }
            }
            RunConfig::Encode(p) => {
                if p.n < 1 || p.m < 1 || !(1..=2).contains(&p.q) || !snr_ok(&p.snr_db) {
                    return bad(format!("encode needs n >= 1, M >= 1, q in {{1, 2}} (got n={}, M={}, q={})", p.n, p.m, p.q));
                }
                if let Some(l) = p.l_max {
                    if l < p.n {
                        return bad(format!("encode needs L >= n (got L={l}, n={})", p.n));
                    }
                }
            }
            RunConfig::Decode(p) => {
                if p.grid < 2 {
                    return bad(format!("decode needs grid >= 2 (got {})", p.grid));
                }
            }
            RunConfig::Validate(_) => {}
        }
        Ok(())
    }
}

fn set<T: Serialize>(map: &mut Map<String, Value>, key: &str, value: &Option<T>) {
    if let Some(v) = value {
        map.insert(key.to_string(), serde_json::to_value(v).expect("override serializes"));
    }
}

/// Build a validated configuration from an optional JSON file plus flags.
pub fn parse_config(
    experiment: Experiment,
    path: Option<&Path>,
    overrides: &Overrides,
) -> Result<RunConfig, CliError> {
    let mut map = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("reading config {}: {e}", p.display())))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(m)) => m,
                Ok(_) => return Err(CliError::Config("config file must hold a JSON object".into())),
                Err(e) => return Err(CliError::Config(format!("malformed JSON in {}: {e}", p.display()))),
            }
        }
        None => Map::new(),
    };
    if let Some(v) = map.remove("experiment") {
        if v.as_str() != Some(experiment.name()) {
            return Err(CliError::Config(format!(
                "config is for experiment {v} but {} was requested",
                experiment.name()
            )));
        }
    }
    set(&mut map, "n", &overrides.n);
    set(&mut map, "M", &overrides.m);
    set(&mut map, "q", &overrides.q);
    set(&mut map, "snr_db", &overrides.snr_db);
    set(&mut map, "seed", &overrides.seed);
    set(&mut map, "grid", &overrides.grid);
    set(&mut map, "out_dir", &overrides.out_dir);
    set(&mut map, "input", &overrides.input);

    let value = Value::Object(map);
    let de = |e: serde_json::Error| CliError::Config(format!("{} config: {e}", experiment.name()));
    let cfg = match experiment {
        Experiment::Ellipse => RunConfig::Ellipse(serde_json::from_value(value).map_err(de)?),
        Experiment::Biexp => RunConfig::Biexp(serde_json::from_value(value).map_err(de)?),
        Experiment::Density => RunConfig::Density(serde_json::from_value(value).map_err(de)?),
        Experiment::KernelDump => RunConfig::KernelDump(serde_json::from_value(value).map_err(de)?),
        Experiment::Encode => RunConfig::Encode(serde_json::from_value(value).map_err(de)?),
        Experiment::Decode => RunConfig::Decode(serde_json::from_value(value).map_err(de)?),
        Experiment::Validate => RunConfig::Validate(serde_json::from_value(value).map_err(de)?),
    };
    cfg.validate()?;
    Ok(cfg)
}
