//! Campaign configuration and dataset loading.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use morphrepair_core::harness::{ModelEndpointConfig, OracleConfig};
use morphrepair_core::metrics::ErrorPolicy;
use morphrepair_core::mr::MrId;
use morphrepair_core::mutant::{BaseSample, DEFAULT_CAP};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub campaign_name: String,
    /// Directories holding one sub-directory per sample.
    pub datasets: Vec<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub mrs: Option<Vec<String>>,
    #[serde(default)]
    pub pd_range: Option<String>,
    #[serde(default)]
    pub cap: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub template: Option<String>,
    #[serde(default)]
    pub template_file: Option<PathBuf>,
    #[serde(default)]
    pub error_policy: ErrorPolicy,
    /// `repair` exits with status 4 when more attempts than this end in error.
    #[serde(default = "default_max_error_fraction")]
    pub max_error_fraction: f64,
    #[serde(default = "default_oracle_concurrency")]
    pub oracle_concurrency: usize,
    pub model: Option<ModelEndpointConfig>,
    #[serde(default)]
    pub oracles: BTreeMap<String, OracleConfig>,
}

fn default_max_error_fraction() -> f64 {
    0.2
}

fn default_oracle_concurrency() -> usize {
    1
}

/// `sample.toml` inside a sample directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleMeta {
    id: Option<String>,
    source: PathBuf,
    #[serde(default)]
    dataset: Option<String>,
    #[serde(default)]
    repair_pattern: Option<String>,
    /// Name of an entry in the campaign's `[oracles]` table.
    oracle: String,
}

/// A base sample together with where it lives on disk.
#[derive(Debug, Clone)]
pub struct LoadedSample {
    pub sample: BaseSample,
    pub dir: PathBuf,
}

/// Parses `a..b` (inclusive) or a single number.
pub fn parse_pd_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad perturbation distance `{t}`"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a == 0 || b > 9 || a > b {
        return Err(format!("perturbation distance range {a}..{b} must lie within 1..9"));
    }
    Ok((a, b))
}

pub fn parse_mrs(items: &[String]) -> Result<Vec<MrId>, String> {
    let mut out = Vec::new();
    for item in items {
        for part in item.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            out.push(part.parse::<MrId>().map_err(|e| e.to_string())?);
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err("empty relation subset".into());
    }
    Ok(out)
}

/// Configuration with command-line overrides applied and paths resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: CampaignConfig,
    pub base_dir: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    pub mrs: Vec<MrId>,
    pub pd_range: (usize, usize),
    pub cap: usize,
    pub template: String,
}

#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub pd: Option<String>,
    pub cap: Option<usize>,
    pub mrs: Option<String>,
    pub out: Option<PathBuf>,
}

pub fn load(path: &Path, ov: &Overrides) -> Result<Resolved, CliError> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let config: CampaignConfig =
        toml::from_str(&raw).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let seed = ov
        .seed
        .or(config.seed)
        .ok_or_else(|| CliError::Config("a seed is required (config `seed` or --seed)".into()))?;
    let mrs = match (&ov.mrs, &config.mrs) {
        (Some(s), _) => parse_mrs(std::slice::from_ref(s)),
        (None, Some(list)) => parse_mrs(list),
        (None, None) => Ok(MrId::ALL.to_vec()),
    }
    .map_err(CliError::Config)?;
    let pd_range = match ov.pd.as_deref().or(config.pd_range.as_deref()) {
        Some(s) => parse_pd_range(s).map_err(CliError::Config)?,
        None => (1, 9),
    };
    let cap = ov.cap.or(config.cap).unwrap_or(DEFAULT_CAP);
    if cap == 0 {
        return Err(CliError::Config("cap must be at least 1".into()));
    }
    let template = match (&config.template, &config.template_file) {
        (Some(_), Some(_)) => return Err(CliError::Config("set either `template` or `template_file`".into())),
        (Some(t), None) => t.clone(),
        (None, Some(f)) => {
            let p = base_dir.join(f);
            fs::read_to_string(&p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        (None, None) => morphrepair_core::harness::DEFAULT_TEMPLATE.to_string(),
    };
    morphrepair_core::harness::check_template(&template).map_err(|e| CliError::Config(e.to_string()))?;
    if !(0.0..=1.0).contains(&config.max_error_fraction) {
        return Err(CliError::Config("max_error_fraction must lie in [0, 1]".into()));
    }
    let out = match (&ov.out, &config.output) {
        (Some(o), _) => o.clone(),
        (None, Some(o)) => base_dir.join(o),
        (None, None) => PathBuf::from("morphrepair-out"),
    };
    Ok(Resolved { config, base_dir, out, seed, mrs, pd_range, cap, template })
}

impl Resolved {
    pub fn lists_path(&self) -> PathBuf {
        self.out.join("lists.json")
    }

    pub fn mutants_dir(&self) -> PathBuf {
        self.out.join("mutants")
    }

    pub fn run_dir(&self) -> PathBuf {
        self.out.join("runs").join(&self.config.campaign_name)
    }

    pub fn attempts_path(&self) -> PathBuf {
        self.run_dir().join("attempts.jsonl")
    }

    pub fn report_dir(&self) -> PathBuf {
        self.out.join("report").join(&self.config.campaign_name)
    }

    pub fn pairs_path(&self) -> PathBuf {
        self.out.join("pairs.jsonl")
    }

    pub fn oracle(&self, name: &str) -> Result<&OracleConfig, CliError> {
        self.config
            .oracles
            .get(name)
            .ok_or_else(|| CliError::Config(format!("unknown oracle `{name}`")))
    }

    /// Every sample under the dataset roots, sorted by id. Unreadable roots are
    /// configuration errors, broken samples data errors.
    pub fn load_samples(&self) -> Result<Vec<LoadedSample>, CliError> {
        let mut out = Vec::new();
        for root in &self.config.datasets {
            let root = self.base_dir.join(root);
            let entries = fs::read_dir(&root)
                .map_err(|e| CliError::Config(format!("dataset root {}: {e}", root.display())))?;
            let default_dataset = root.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            for entry in entries {
                let dir = entry.map_err(|e| CliError::Config(e.to_string()))?.path();
                let meta_path = dir.join("sample.toml");
                if !meta_path.is_file() {
                    continue;
                }
                out.push(load_sample(&dir, &meta_path, &default_dataset)?);
            }
        }
        out.sort_by(|a, b| a.sample.id.cmp(&b.sample.id));
        if let Some(w) = out.windows(2).find(|w| w[0].sample.id == w[1].sample.id) {
            return Err(CliError::Data(format!("duplicate sample id `{}`", w[0].sample.id)));
        }
        for s in &out {
            self.oracle(&s.sample.oracle_ref)?;
        }
        Ok(out)
    }
}

fn load_sample(dir: &Path, meta_path: &Path, default_dataset: &str) -> Result<LoadedSample, CliError> {
    let data = |e: String| CliError::Data(format!("{}: {e}", meta_path.display()));
    let raw = fs::read_to_string(meta_path).map_err(|e| data(e.to_string()))?;
    let meta: SampleMeta = toml::from_str(&raw).map_err(|e| data(e.to_string()))?;
    let src_path = dir.join(&meta.source);
    let source = fs::read_to_string(&src_path).map_err(|e| data(format!("{}: {e}", src_path.display())))?;
    let id = meta
        .id
        .unwrap_or_else(|| dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default());
    if id.is_empty() || id.contains(['/', '\\']) || id.contains("__") {
        return Err(data(format!("invalid sample id `{id}`")));
    }
    let mut sample = BaseSample::new(id, &source);
    sample.dataset = meta.dataset.unwrap_or_else(|| default_dataset.to_string());
    sample.repair_pattern = meta.repair_pattern.unwrap_or_else(|| "unknown".into());
    sample.oracle_ref = meta.oracle;
    let dir = dir.canonicalize().unwrap_or_else(|_| dir.to_path_buf());
    Ok(LoadedSample { sample, dir })
}
