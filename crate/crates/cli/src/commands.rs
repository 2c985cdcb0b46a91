use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use morphrepair_core::harness::{
    run_campaign, AttemptRecord, CampaignOptions, HttpModel, Job, MockScript, MockServer,
};
use morphrepair_core::metrics::{export_pairs, group_metrics, render_report, GroupKey};
use morphrepair_core::mr::MrId;
use morphrepair_core::mutant::{detect_applicable, enumerate_combos, generate_mutant, MutantStore, PerturbationList};

use crate::config::{LoadedSample, Resolved};
use crate::CliError;

static STOP: AtomicBool = AtomicBool::new(false);

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Data(format!("{}: {e}", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

type Lists = BTreeMap<String, Vec<MrId>>;

pub fn detect(r: &Resolved) -> Result<Lists, CliError> {
    let samples = r.load_samples()?;
    let mut lists = Lists::new();
    let mut failed = Vec::new();
    for s in &samples {
        match detect_applicable(&s.sample, r.seed) {
            Ok(l) => {
                println!("{}: {}", s.sample.id, codes(&l.applicable));
                lists.insert(l.sample_id, l.applicable);
            }
            Err(e) => {
                eprintln!("{}: {e}", s.sample.id);
                failed.push(s.sample.id.clone());
            }
        }
    }
    write_json(&r.lists_path(), &lists)?;
    if !failed.is_empty() {
        return Err(CliError::Data(format!("unparsable samples: {}", failed.join(", "))));
    }
    Ok(lists)
}

fn codes(ids: &[MrId]) -> String {
    if ids.is_empty() {
        return "-".into();
    }
    ids.iter().map(|m| m.code()).collect::<Vec<_>>().join(",")
}

fn read_lists(path: &Path) -> Result<Option<Lists>, CliError> {
    if !path.exists() {
        return Ok(None);
    }
    let raw = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&raw).map(Some).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn mutate_sample(
    r: &Resolved,
    s: &LoadedSample,
    store: &MutantStore,
    lists: Option<&Lists>,
    per_pd: &mut BTreeMap<usize, (usize, usize)>,
) -> Result<(), String> {
    let applicable = match lists.and_then(|l| l.get(&s.sample.id)) {
        Some(a) => a.clone(),
        None => detect_applicable(&s.sample, r.seed).map_err(|e| e.to_string())?.applicable,
    };
    let list = PerturbationList {
        sample_id: s.sample.id.clone(),
        applicable: applicable.into_iter().filter(|m| r.mrs.contains(m)).collect(),
    };
    let dir = store.root().join(&s.sample.id);
    if dir.exists() {
        fs::remove_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    store.write_base(&s.sample).map_err(|e| e.to_string())?;
    let (lo, hi) = r.pd_range;
    for pd in lo..=hi.min(list.applicable.len()) {
        let combos = enumerate_combos(&list, pd, r.cap, r.seed).map_err(|e| e.to_string())?;
        for combo in combos {
            let m = generate_mutant(&s.sample, &combo, r.seed).map_err(|e| e.to_string())?;
            store.write(&m).map_err(|e| e.to_string())?;
            let slot = per_pd.entry(pd).or_default();
            if m.degenerate { slot.1 += 1 } else { slot.0 += 1 }
        }
    }
    Ok(())
}

pub fn mutate(r: &Resolved, keep_going: bool) -> Result<(), CliError> {
    let samples = r.load_samples()?;
    let lists = read_lists(&r.lists_path())?;
    let store = MutantStore::new(r.mutants_dir());
    let mut per_pd: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut failed = Vec::new();
    for s in &samples {
        if let Err(e) = mutate_sample(r, s, &store, lists.as_ref(), &mut per_pd) {
            eprintln!("{}: {e}", s.sample.id);
            if !keep_going {
                return Err(CliError::Data(format!("mutating {}: {e}", s.sample.id)));
            }
            failed.push(s.sample.id.clone());
        }
    }
    for (pd, (ok, degenerate)) in &per_pd {
        println!("pd{pd}: {ok} mutants ({degenerate} degenerate)");
    }
    let total: usize = per_pd.values().map(|v| v.0).sum();
    println!("total: {total} mutants from {} samples", samples.len() - failed.len());
    Ok(())
}

fn read_records(path: &Path) -> Result<Vec<AttemptRecord>, CliError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    let lines: Vec<String> = BufReader::new(file).lines().collect::<Result<_, _>>().map_err(io_err(path))?;
    let n = lines.len();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(rec) => out.push(rec),
            // A run killed mid-write leaves a torn last line.
            Err(_) if i + 1 == n => eprintln!("{}: ignoring incomplete last line", path.display()),
            Err(e) => return Err(CliError::Data(format!("{}:{}: {e}", path.display(), i + 1))),
        }
    }
    Ok(out)
}

/// Cuts an incomplete last line so appended records start on a fresh line.
fn drop_torn_tail(path: &Path) -> Result<(), CliError> {
    let Ok(bytes) = fs::read(path) else { return Ok(()) };
    if bytes.is_empty() || bytes.ends_with(b"\n") {
        return Ok(());
    }
    let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    let file = OpenOptions::new().write(true).open(path).map_err(io_err(path))?;
    file.set_len(keep as u64).map_err(io_err(path))
}

pub fn repair(r: &Resolved, mock: Option<&Path>) -> Result<(), CliError> {
    let mut model_cfg = r
        .config
        .model
        .clone()
        .ok_or_else(|| CliError::Config("no [model] section".into()))?;
    let _server = match mock {
        Some(path) => {
            let script = MockScript::load(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let server = MockServer::start(script).map_err(|e| CliError::Config(format!("mock server: {e}")))?;
            model_cfg.base_url = server.base_url();
            model_cfg.auth = None;
            Some(server)
        }
        None => None,
    };
    let model = HttpModel::new(model_cfg.clone()).map_err(|e| CliError::Config(e.to_string()))?;

    let samples: HashMap<String, LoadedSample> =
        r.load_samples()?.into_iter().map(|s| (s.sample.id.clone(), s)).collect();
    let store = MutantStore::new(r.mutants_dir());
    let stored = store.load_all().map_err(|e| CliError::Data(e.to_string()))?;
    if stored.is_empty() {
        return Err(CliError::Data(format!("no mutants under {}", store.root().display())));
    }
    let attempts_path = r.attempts_path();
    let done: HashSet<(String, String)> = read_records(&attempts_path)?
        .into_iter()
        .map(|rec| (rec.model, rec.mutant_id))
        .collect();

    let mut shared: HashMap<String, (Arc<_>, Arc<_>)> = HashMap::new();
    let mut jobs = Vec::new();
    for sm in stored {
        if sm.meta.degenerate || done.contains(&(model_cfg.model_name.clone(), sm.meta.id.clone())) {
            continue;
        }
        let s = samples
            .get(&sm.meta.base_id)
            .ok_or_else(|| CliError::Data(format!("mutant {} has no sample `{}`", sm.meta.id, sm.meta.base_id)))?;
        let (sample, oracle) = match shared.get(&s.sample.id) {
            Some(v) => v.clone(),
            None => {
                let v = (Arc::new(s.sample.clone()), Arc::new(r.oracle(&s.sample.oracle_ref)?.clone()));
                shared.insert(s.sample.id.clone(), v.clone());
                v
            }
        };
        jobs.push(Job { mutant: sm.into_mutant(), sample, oracle, sample_dir: Some(s.dir.clone()) });
    }
    if jobs.is_empty() {
        println!("nothing to do: every mutant already has a record for {}", model_cfg.model_name);
        return Ok(());
    }

    let _ = ctrlc::set_handler(|| {
        eprintln!("interrupt: finishing in-flight attempts");
        STOP.store(true, Ordering::SeqCst);
    });
    fs::create_dir_all(r.run_dir()).map_err(io_err(&r.run_dir()))?;
    drop_torn_tail(&attempts_path)?;
    let mut sink = OpenOptions::new().create(true).append(true).open(&attempts_path).map_err(io_err(&attempts_path))?;
    let opts = CampaignOptions {
        model_name: model_cfg.model_name.clone(),
        template: r.template.clone(),
        max_concurrency: model_cfg.max_concurrency,
        oracle_concurrency: r.config.oracle_concurrency,
        artifacts_dir: Some(r.run_dir().join("artifacts")),
    };
    let stats = run_campaign(&jobs, &model, &opts, &STOP, |rec| {
        let mut line = serde_json::to_string(rec).expect("record serializes");
        line.push('\n');
        sink.write_all(line.as_bytes())?;
        sink.flush()
    })
    .map_err(io_err(&attempts_path))?;

    println!(
        "{}: {} valid, {} invalid, {} error, {} not started",
        model_cfg.model_name, stats.valid, stats.invalid, stats.error, stats.skipped
    );
    if stats.error_fraction() > r.config.max_error_fraction {
        return Err(CliError::Health(format!(
            "{:.1}% of attempts ended in error (limit {:.1}%)",
            100.0 * stats.error_fraction(),
            100.0 * r.config.max_error_fraction
        )));
    }
    Ok(())
}

pub fn report(r: &Resolved, with_pairs: bool) -> Result<(), CliError> {
    let path = r.attempts_path();
    let records = read_records(&path)?;
    if records.is_empty() {
        return Err(CliError::Config(format!("no attempt records in {}", path.display())));
    }
    let dir = r.report_dir();
    render_report(&dir, &records, r.config.error_policy).map_err(io_err(&dir))?;
    for s in group_metrics(&records, GroupKey::Model, r.config.error_policy) {
        let score = s.r_score.map_or("-".to_string(), |v| format!("{v:.3}"));
        println!("{}: R-score {score} ({} valid, {} invalid)", s.scope_key, s.valid, s.invalid);
    }
    println!("report written to {}", dir.display());
    if with_pairs {
        export(&r.mutants_dir(), &r.pairs_path())?;
    }
    Ok(())
}

pub fn export(mutants: &Path, out: &Path) -> Result<(), CliError> {
    let stored = MutantStore::new(mutants).load_all().map_err(|e| CliError::Data(e.to_string()))?;
    let n = export_pairs(&stored, out).map_err(io_err(out))?;
    println!("{n} pairs written to {}", out.display());
    Ok(())
}
