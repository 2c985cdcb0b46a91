//! Applicability detection, combination sampling and mutant generation.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::mr::{apply_mr, MrContext, MrId, RenameMap, UnknownMr};
use crate::syntax::{normalize_newlines, parse_java, text_differs, ParseError};

/// Default number of combinations kept per perturbation distance.
pub const DEFAULT_CAP: usize = 20;

/// An original buggy program, root of a family of mutants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseSample {
    pub id: String,
    pub source: String,
    #[serde(default)]
    pub dataset: String,
    #[serde(default = "unknown_pattern")]
    pub repair_pattern: String,
    #[serde(default)]
    pub oracle_ref: String,
}

fn unknown_pattern() -> String {
    "unknown".to_string()
}

impl BaseSample {
    /// Builds a sample, normalizing line endings to LF.
    pub fn new(id: impl Into<String>, source: &str) -> Self {
        BaseSample {
            id: id.into(),
            source: normalize_newlines(source).into_owned(),
            dataset: String::new(),
            repair_pattern: unknown_pattern(),
            oracle_ref: String::new(),
        }
    }
}

/// Relations that change a sample when applied on their own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationList {
    pub sample_id: String,
    pub applicable: Vec<MrId>,
}

/// Applies every relation to the original text and keeps the ones that changed it.
pub fn detect_applicable(sample: &BaseSample, seed: u64) -> Result<PerturbationList, ParseError> {
    // A fatal parse fails every relation alike; check once up front.
    parse_java(&sample.source)?;
    let mut applicable = Vec::new();
    for id in MrId::ALL {
        let out = apply_mr(id, &sample.source, &mut MrContext::new(seed))?;
        if out.applied {
            applicable.push(id);
        }
    }
    Ok(PerturbationList { sample_id: sample.id.clone(), applicable })
}

/// A non-empty, sorted set of relations applied together.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComboSpec(Vec<MrId>);

impl ComboSpec {
    /// Sorts and dedups; `None` when empty.
    pub fn new(mut ids: Vec<MrId>) -> Option<Self> {
        ids.sort();
        ids.dedup();
        (!ids.is_empty()).then_some(ComboSpec(ids))
    }

    pub fn ids(&self) -> &[MrId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether this combo is a single relation.
    pub fn single(&self) -> Option<MrId> {
        match self.0.as_slice() {
            [one] => Some(*one),
            _ => None,
        }
    }
}

impl fmt::Display for ComboSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for id in &self.0 {
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComboParseError {
    #[error("empty relation combination")]
    Empty,
    #[error(transparent)]
    Unknown(#[from] UnknownMr),
}

impl FromStr for ComboSpec {
    type Err = ComboParseError;

    /// Accepts `m1m4m5` as well as comma separated lists.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let parts: Vec<&str> = if lower.contains(',') {
            lower.split(',').map(str::trim).filter(|p| !p.is_empty()).collect()
        } else {
            lower.split('m').filter(|p| !p.is_empty()).collect()
        };
        let mut ids = Vec::new();
        for p in parts {
            ids.push(p.parse::<MrId>()?);
        }
        ComboSpec::new(ids).ok_or(ComboParseError::Empty)
    }
}

impl Serialize for ComboSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ComboSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RangeError {
    #[error("perturbation distance {pd} outside 1..={max}")]
    Distance { pd: usize, max: usize },
    #[error("cap must be at least 1")]
    Cap,
}

/// Binomial coefficient. Exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i as u64 + 1);
    }
    acc
}

/// All k-subsets of `items` in lexicographic index order.
fn subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn sample_seed(seed: u64, sample_id: &str) -> u64 {
    let digest = Sha256::digest(sample_id.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    seed ^ u64::from_le_bytes(bytes)
}

/// The C(l, pd) combinations of the applicable relations, or `cap` of them
/// drawn without replacement when there are more.
pub fn enumerate_combos(
    list: &PerturbationList,
    pd: usize,
    cap: usize,
    seed: u64,
) -> Result<Vec<ComboSpec>, RangeError> {
    let l = list.applicable.len();
    if pd == 0 || pd > l {
        return Err(RangeError::Distance { pd, max: l });
    }
    if cap == 0 {
        return Err(RangeError::Cap);
    }
    let mut ids = list.applicable.clone();
    ids.sort();
    ids.dedup();
    let all = subsets(&ids, pd);
    let mut picked: Vec<ComboSpec> = if all.len() <= cap {
        all.into_iter().filter_map(ComboSpec::new).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, &list.sample_id));
        rng.set_stream(pd as u64);
        rand::seq::index::sample(&mut rng, all.len(), cap)
            .into_iter()
            .filter_map(|i| ComboSpec::new(all[i].clone()))
            .collect()
    };
    picked.sort();
    Ok(picked)
}

/// Number of steps that changed the text.
pub fn perturbation_distance(steps: &[bool]) -> usize {
    steps.iter().filter(|&&s| s).count()
}

/// Outcome of one relation inside a combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFlag {
    pub mr: MrId,
    pub applied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutant {
    pub id: String,
    pub base_id: String,
    pub combo: ComboSpec,
    pub text: String,
    pub rename_map: RenameMap,
    pub pd: usize,
    pub seed: u64,
    pub flags: Vec<StepFlag>,
    /// Final text equals the original.
    pub degenerate: bool,
}

impl Mutant {
    /// Fewer relations took effect than were requested.
    pub fn interacting(&self) -> bool {
        self.pd < self.combo.len()
    }
}

pub fn mutant_id(base_id: &str, combo: &ComboSpec, seed: u64) -> String {
    format!("{base_id}__{combo}__s{seed}")
}

/// Applies the combo in ascending order, threading the text and counters.
pub fn generate_mutant(sample: &BaseSample, combo: &ComboSpec, seed: u64) -> Result<Mutant, ParseError> {
    let mut ctx = MrContext::new(seed);
    let mut text = sample.source.clone();
    let mut rename_map = RenameMap::default();
    let mut flags = Vec::with_capacity(combo.len());
    for &mr in combo.ids() {
        let out = apply_mr(mr, &text, &mut ctx)?;
        flags.push(StepFlag { mr, applied: out.applied });
        rename_map.merge(&out.rename_map);
        text = out.text;
    }
    let pd = perturbation_distance(&flags.iter().map(|f| f.applied).collect::<Vec<_>>());
    Ok(Mutant {
        id: mutant_id(&sample.id, combo, seed),
        base_id: sample.id.clone(),
        combo: combo.clone(),
        degenerate: !text_differs(&sample.source, &text),
        text,
        rename_map,
        pd,
        seed,
        flags,
    })
}

/// Sidecar metadata stored next to each mutant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutantMeta {
    pub id: String,
    pub base_id: String,
    pub combo: ComboSpec,
    pub pd: usize,
    pub rename_map: RenameMap,
    pub seed: u64,
    pub flags: Vec<StepFlag>,
    #[serde(default)]
    pub degenerate: bool,
}

/// A mutant read back from the store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredMutant {
    pub meta: MutantMeta,
    pub text: String,
    pub base_text: String,
}

impl StoredMutant {
    pub fn into_mutant(self) -> Mutant {
        let m = self.meta;
        Mutant {
            id: m.id,
            base_id: m.base_id,
            combo: m.combo,
            text: self.text,
            rename_map: m.rename_map,
            pd: m.pd,
            seed: m.seed,
            flags: m.flags,
            degenerate: m.degenerate,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: bad metadata: {source}")]
    Meta { path: PathBuf, source: serde_json::Error },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> StoreError + '_ {
    move |source| StoreError::Io { path: path.to_path_buf(), source }
}

/// `mutants/<sample>/pd<k>/<combo>-<seed>.java` plus `.meta.json`, with the
/// original text in `mutants/<sample>/base.java`.
#[derive(Debug, Clone)]
pub struct MutantStore {
    root: PathBuf,
}

impl MutantStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        MutantStore { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Path of the `.java` file for a mutant. The directory is keyed by the
    /// combo size, the distance that was asked for.
    pub fn mutant_path(&self, m: &Mutant) -> PathBuf {
        self.root
            .join(&m.base_id)
            .join(format!("pd{}", m.combo.len()))
            .join(format!("{}-{}.java", m.combo, m.seed))
    }

    pub fn write_base(&self, sample: &BaseSample) -> Result<(), StoreError> {
        let dir = self.root.join(&sample.id);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let path = dir.join("base.java");
        fs::write(&path, &sample.source).map_err(io_err(&path))
    }

    pub fn write(&self, m: &Mutant) -> Result<PathBuf, StoreError> {
        let path = self.mutant_path(m);
        let dir = path.parent().expect("mutant path has a parent");
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        fs::write(&path, &m.text).map_err(io_err(&path))?;
        let meta = MutantMeta {
            id: m.id.clone(),
            base_id: m.base_id.clone(),
            combo: m.combo.clone(),
            pd: m.pd,
            rename_map: m.rename_map.clone(),
            seed: m.seed,
            flags: m.flags.clone(),
            degenerate: m.degenerate,
        };
        let meta_path = path.with_extension("meta.json");
        let mut json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        json.push('\n');
        fs::write(&meta_path, json).map_err(io_err(&meta_path))?;
        Ok(path)
    }

    /// Every stored mutant, sorted by id.
    pub fn load_all(&self) -> Result<Vec<StoredMutant>, StoreError> {
        let mut out = Vec::new();
        if !self.root.exists() {
            return Ok(out);
        }
        for sample_dir in sorted_dirs(&self.root)? {
            let base_path = sample_dir.join("base.java");
            let base_text = fs::read_to_string(&base_path).map_err(io_err(&base_path))?;
            for pd_dir in sorted_dirs(&sample_dir)? {
                let mut metas: Vec<PathBuf> = fs::read_dir(&pd_dir)
                    .map_err(io_err(&pd_dir))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.to_string_lossy().ends_with(".meta.json"))
                    .collect();
                metas.sort();
                for meta_path in metas {
                    let raw = fs::read_to_string(&meta_path).map_err(io_err(&meta_path))?;
                    let meta: MutantMeta = serde_json::from_str(&raw)
                        .map_err(|source| StoreError::Meta { path: meta_path.clone(), source })?;
                    let name = meta_path.to_string_lossy();
                    let java = PathBuf::from(format!("{}.java", name.trim_end_matches(".meta.json")));
                    let text = fs::read_to_string(&java).map_err(io_err(&java))?;
                    out.push(StoredMutant { meta, text, base_text: base_text.clone() });
                }
            }
        }
        out.sort_by(|a, b| a.meta.id.cmp(&b.meta.id));
        Ok(out)
    }
}

fn sorted_dirs(dir: &Path) -> Result<Vec<PathBuf>, StoreError> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(dirs)
}
