//! R-score, edit distance, rank correlation, grouped summaries and reports.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::harness::{AttemptRecord, Outcome};
use crate::mutant::{ComboSpec, StoredMutant};
use crate::syntax::lexer::significant_tokens;
use crate::syntax::text_differs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no valid or invalid outcomes in group")]
pub struct EmptyGroup;

/// valid / (valid + invalid).
pub fn r_score(valid: u64, invalid: u64) -> Result<f64, EmptyGroup> {
    let total = valid + invalid;
    if total == 0 {
        return Err(EmptyGroup);
    }
    Ok(valid as f64 / total as f64)
}

/// Levenshtein distance over any comparable sequence, in two rows.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.len() < b.len() {
        return levenshtein(b, a);
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Token-level edit distance. Whitespace is ignored, each comment is one token.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let ta: Vec<&str> = significant_tokens(a).iter().map(|t| t.text(a)).collect();
    let tb: Vec<&str> = significant_tokens(b).iter().map(|t| t.text(b)).collect();
    levenshtein(&ta, &tb)
}

/// Character-level edit distance.
pub fn char_edit_distance(a: &str, b: &str) -> usize {
    let ca: Vec<char> = a.chars().collect();
    let cb: Vec<char> = b.chars().collect();
    levenshtein(&ca, &cb)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SpearmanError {
    #[error("lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 3 pairs, got {0}")]
    TooShort(usize),
    #[error("one list is constant")]
    DegenerateInput,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub rho: f64,
    pub p_value: f64,
}

/// Largest n for which the p-value is computed by full permutation.
pub const EXACT_P_MAX_N: usize = 10;

/// 1-based ranks, ties get the average of their positions.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    (sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0)
}

/// Two-sided permutation p-value. Heap's algorithm walks all n! orderings of
/// `b`; each swap updates the cross product in constant time.
fn exact_p(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let ma = a.iter().sum::<f64>() / n as f64;
    let mb = b.iter().sum::<f64>() / n as f64;
    let ca: Vec<f64> = a.iter().map(|x| x - ma).collect();
    let mut cb: Vec<f64> = b.iter().map(|y| y - mb).collect();
    let dot = |cb: &[f64]| ca.iter().zip(cb).map(|(x, y)| x * y).sum::<f64>();
    let observed = dot(&cb).abs();
    let tol = 1e-9 * (1.0 + observed);
    let mut current = dot(&cb);
    let mut hits: u64 = 0;
    let mut total: u64 = 0;
    let mut count = |v: f64| {
        total += 1;
        if v.abs() >= observed - tol {
            hits += 1;
        }
    };
    count(current);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            current += (ca[j] - ca[i]) * (cb[i] - cb[j]);
            cb.swap(i, j);
            count(current);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hits as f64 / total as f64
}

fn t_approx_p(rho: f64, n: usize) -> f64 {
    if rho.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df is positive");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

/// Spearman's rho (Pearson over average ranks) with a two-sided p-value:
/// exact by permutation up to [`EXACT_P_MAX_N`] pairs, Student's t beyond.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<Spearman, SpearmanError> {
    if xs.len() != ys.len() {
        return Err(SpearmanError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n < 3 {
        return Err(SpearmanError::TooShort(n));
    }
    let constant = |v: &[f64]| v.iter().all(|x| *x == v[0]);
    if constant(xs) || constant(ys) {
        return Err(SpearmanError::DegenerateInput);
    }
    let (rx, ry) = (average_ranks(xs), average_ranks(ys));
    let rho = if rx == ry {
        1.0
    } else if rx.iter().zip(&ry).all(|(a, b)| a + b == (n + 1) as f64) {
        -1.0
    } else {
        pearson(&rx, &ry)
    };
    let p_value = if n <= EXACT_P_MAX_N { exact_p(&rx, &ry) } else { t_approx_p(rho, n) };
    Ok(Spearman { rho, p_value })
}

/// What a summary is keyed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKey {
    Overall,
    Model,
    Dataset,
    /// Single-relation mutants only.
    Mr,
    Pd,
    RepairPattern,
}

impl GroupKey {
    pub const ALL: [GroupKey; 6] =
        [GroupKey::Overall, GroupKey::Model, GroupKey::Dataset, GroupKey::Mr, GroupKey::Pd, GroupKey::RepairPattern];

    pub fn name(self) -> &'static str {
        match self {
            GroupKey::Overall => "overall",
            GroupKey::Model => "model",
            GroupKey::Dataset => "dataset",
            GroupKey::Mr => "mr",
            GroupKey::Pd => "pd",
            GroupKey::RepairPattern => "repair_pattern",
        }
    }

    /// Key value of a record, `None` if the record does not belong to any group.
    fn value(self, r: &AttemptRecord) -> Option<String> {
        match self {
            GroupKey::Overall => Some("all".into()),
            GroupKey::Model => Some(r.model.clone()),
            GroupKey::Dataset => Some(r.dataset.clone()),
            GroupKey::Mr => r.combo.single().map(|m| m.name().to_string()),
            GroupKey::Pd => Some(format!("{:02}", r.pd)),
            GroupKey::RepairPattern => Some(r.repair_pattern.clone()),
        }
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How error verdicts enter the counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorPolicy {
    #[default]
    Exclude,
    CountAsInvalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub scope_key: String,
    pub valid: u64,
    pub invalid: u64,
    pub r_score: Option<f64>,
    pub avg_edit_distance: Option<f64>,
}

#[derive(Default)]
struct Acc {
    valid: u64,
    invalid: u64,
    dist_sum: u64,
    dist_n: u64,
}

/// One summary per distinct key value, sorted by key.
pub fn group_metrics(records: &[AttemptRecord], key: GroupKey, policy: ErrorPolicy) -> Vec<MetricsSummary> {
    let mut groups: BTreeMap<String, Acc> = BTreeMap::new();
    for r in records {
        let counted = match (r.outcome, policy) {
            (Outcome::Valid, _) => Some(true),
            (Outcome::Invalid, _) | (Outcome::Error, ErrorPolicy::CountAsInvalid) => Some(false),
            (Outcome::Error, ErrorPolicy::Exclude) => None,
        };
        let (Some(valid), Some(k)) = (counted, key.value(r)) else { continue };
        let acc = groups.entry(k).or_default();
        if valid {
            acc.valid += 1;
        } else {
            acc.invalid += 1;
        }
        if let Some(d) = r.edit_distance {
            acc.dist_sum += d as u64;
            acc.dist_n += 1;
        }
    }
    groups
        .into_iter()
        .map(|(k, a)| MetricsSummary {
            scope_key: k,
            valid: a.valid,
            invalid: a.invalid,
            r_score: r_score(a.valid, a.invalid).ok(),
            avg_edit_distance: (a.dist_n > 0).then(|| a.dist_sum as f64 / a.dist_n as f64),
        })
        .collect()
}

pub fn write_csv(path: &Path, summaries: &[MetricsSummary]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(["scope_key", "valid", "invalid", "r_score", "avg_edit_distance"])?;
    for s in summaries {
        w.write_record([
            s.scope_key.clone(),
            s.valid.to_string(),
            s.invalid.to_string(),
            s.r_score.map(|v| v.to_string()).unwrap_or_default(),
            s.avg_edit_distance.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()
}

pub fn read_csv(path: &Path) -> io::Result<Vec<MetricsSummary>> {
    let mut r = csv::Reader::from_path(path)?;
    let bad = |e: String| io::Error::new(io::ErrorKind::InvalidData, e);
    let opt = |s: &str| -> io::Result<Option<f64>> {
        if s.is_empty() { Ok(None) } else { s.parse().map(Some).map_err(|e| bad(format!("{e}"))) }
    };
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        if row.len() != 5 {
            return Err(bad(format!("expected 5 columns, got {}", row.len())));
        }
        out.push(MetricsSummary {
            scope_key: row[0].to_string(),
            valid: row[1].parse().map_err(|e| bad(format!("{e}")))?,
            invalid: row[2].parse().map_err(|e| bad(format!("{e}")))?,
            r_score: opt(&row[3])?,
            avg_edit_distance: opt(&row[4])?,
        });
    }
    Ok(out)
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.digits$}"))
}

pub fn markdown_table(key: GroupKey, summaries: &[MetricsSummary]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "| {key} | valid | invalid | R-score | avg edit distance |");
    let _ = writeln!(s, "|---|---:|---:|---:|---:|");
    for m in summaries {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            m.scope_key,
            m.valid,
            m.invalid,
            fmt_opt(m.r_score, 3),
            fmt_opt(m.avg_edit_distance, 2)
        );
    }
    s
}

/// Models as rows, datasets as columns; each cell `valid/invalid (R)`.
pub fn model_dataset_table(records: &[AttemptRecord], policy: ErrorPolicy) -> String {
    let mut cells: BTreeMap<(String, String), (u64, u64)> = BTreeMap::new();
    let mut datasets: Vec<String> = Vec::new();
    for r in records {
        let valid = match (r.outcome, policy) {
            (Outcome::Valid, _) => true,
            (Outcome::Invalid, _) | (Outcome::Error, ErrorPolicy::CountAsInvalid) => false,
            (Outcome::Error, ErrorPolicy::Exclude) => continue,
        };
        if !datasets.contains(&r.dataset) {
            datasets.push(r.dataset.clone());
        }
        let c = cells.entry((r.model.clone(), r.dataset.clone())).or_default();
        if valid { c.0 += 1 } else { c.1 += 1 }
    }
    datasets.sort();
    let models: Vec<&String> = {
        let mut m: Vec<&String> = cells.keys().map(|(m, _)| m).collect();
        m.dedup();
        m
    };
    let mut s = String::new();
    let _ = write!(s, "| model |");
    for d in &datasets {
        let _ = write!(s, " {d} valid | {d} invalid | {d} R-score |");
    }
    let _ = write!(s, "\n|---|");
    for _ in &datasets {
        s.push_str("---:|---:|---:|");
    }
    s.push('\n');
    for m in models {
        let _ = write!(s, "| {m} |");
        for d in &datasets {
            match cells.get(&(m.clone(), d.clone())) {
                Some(&(v, i)) => {
                    let _ = write!(s, " {v} | {i} | {} |", fmt_opt(r_score(v, i).ok(), 3));
                }
                None => s.push_str(" - | - | - |"),
            }
        }
        s.push('\n');
    }
    s
}

/// Writes `<key>.csv` and `<key>.md` for each grouping, `report.md` with all
/// tables, and `pd_series.csv` with the R-score per distance.
pub fn render_report(dir: &Path, records: &[AttemptRecord], policy: ErrorPolicy) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut report = String::from("# Robustness report\n\n");
    let _ = writeln!(report, "Records: {}\n", records.len());
    if !records.is_empty() {
        report.push_str("## model by dataset\n\n");
        report.push_str(&model_dataset_table(records, policy));
        report.push('\n');
    }
    for key in GroupKey::ALL {
        let summaries = group_metrics(records, key, policy);
        write_csv(&dir.join(format!("{key}.csv")), &summaries)?;
        let table = markdown_table(key, &summaries);
        fs::write(dir.join(format!("{key}.md")), &table)?;
        let _ = write!(report, "## {key}\n\n{table}\n");
        if key == GroupKey::Pd {
            let mut series = String::from("pd,r_score\n");
            for s in &summaries {
                let pd: usize = s.scope_key.parse().unwrap_or(0);
                let _ = writeln!(series, "{pd},{}", s.r_score.map(|v| v.to_string()).unwrap_or_default());
            }
            fs::write(dir.join("pd_series.csv"), series)?;
        }
    }
    fs::write(dir.join("report.md"), report)
}

/// One readability training example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingPair {
    pub x: String,
    pub x_prime: String,
    pub base_id: String,
    pub combo: ComboSpec,
}

/// Writes perturbed/original pairs as JSON lines, skipping degenerate mutants.
pub fn export_pairs(mutants: &[StoredMutant], out: &Path) -> io::Result<usize> {
    if let Some(parent) = out.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = io::BufWriter::new(fs::File::create(out)?);
    let mut n = 0;
    for m in mutants {
        if m.meta.degenerate || !text_differs(&m.text, &m.base_text) {
            continue;
        }
        let pair = TrainingPair {
            x: m.text.clone(),
            x_prime: m.base_text.clone(),
            base_id: m.meta.base_id.clone(),
            combo: m.meta.combo.clone(),
        };
        serde_json::to_writer(&mut w, &pair)?;
        w.write_all(b"\n")?;
        n += 1;
    }
    w.flush()?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_scores() {
        assert!((r_score(604, 405).unwrap() - 0.599).abs() < 5e-4);
        assert!((r_score(517, 1568).unwrap() - 0.248).abs() < 5e-4);
        assert_eq!(r_score(7, 0).unwrap(), 1.0);
        assert_eq!(r_score(0, 0), Err(EmptyGroup));
    }

    #[test]
    fn token_distance() {
        assert_eq!(edit_distance("x = 1;", "x = 1;"), 0);
        assert_eq!(edit_distance("x = 1", "y = 1"), 1);
        assert_eq!(edit_distance("x=1;", "x  =  1 ;"), 0);
        assert_eq!(edit_distance("a;", "a; // c"), 1);
        assert_eq!(char_edit_distance("kitten", "sitting"), 3);
    }

    #[test]
    fn ranks_with_ties() {
        assert_eq!(average_ranks(&[10.0, 20.0, 20.0, 30.0]), [1.0, 2.5, 2.5, 4.0]);
    }

    #[test]
    fn spearman_basics() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(spearman(&xs, &[2.0, 4.0, 8.0, 16.0, 32.0]).unwrap().rho, 1.0);
        assert_eq!(spearman(&xs, &[5.0, 4.0, 3.0, 2.0, 1.0]).unwrap().rho, -1.0);
        // only the identity and its reverse reach |rho| = 1
        assert!((spearman(&xs, &xs).unwrap().p_value - 2.0 / 120.0).abs() < 1e-12);
        assert_eq!(spearman(&xs, &[1.0; 5]), Err(SpearmanError::DegenerateInput));
        assert_eq!(spearman(&xs[..2], &xs[..2]), Err(SpearmanError::TooShort(2)));
    }

    #[test]
    fn spearman_large_n_uses_t() {
        let xs: Vec<f64> = (0..30).map(f64::from).collect();
        let ys: Vec<f64> = (0..30).map(|i| ((i * 7) % 30) as f64).collect();
        let s = spearman(&xs, &ys).unwrap();
        assert!(s.p_value > 0.0 && s.p_value <= 1.0);
    }
}
