use std::collections::{BTreeMap, HashMap};
use std::io;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::sync::{Arc, Condvar, Mutex};
use std::thread;

use super::{attempt_record, repair_with, run_oracle, AttemptRecord, ChatModel, OracleConfig, Outcome};
use crate::mutant::{BaseSample, Mutant};

/// One mutant to repair, with what its oracle needs.
#[derive(Debug, Clone)]
pub struct Job {
    pub mutant: Mutant,
    pub sample: Arc<BaseSample>,
    pub oracle: Arc<OracleConfig>,
    pub sample_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct CampaignOptions {
    pub model_name: String,
    pub template: String,
    pub max_concurrency: usize,
    pub oracle_concurrency: usize,
    /// Where prompts, responses and patches are kept, one directory per mutant.
    pub artifacts_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CampaignStats {
    pub valid: usize,
    pub invalid: usize,
    pub error: usize,
    /// Jobs never started because of a stop request.
    pub skipped: usize,
}

impl CampaignStats {
    pub fn attempted(&self) -> usize {
        self.valid + self.invalid + self.error
    }

    pub fn error_fraction(&self) -> f64 {
        match self.attempted() {
            0 => 0.0,
            n => self.error as f64 / n as f64,
        }
    }
}

struct Semaphore {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Semaphore {
    fn new(n: usize) -> Self {
        Semaphore { free: Mutex::new(n.max(1)), cv: Condvar::new() }
    }

    fn run<T>(&self, f: impl FnOnce() -> T) -> T {
        {
            let mut free = self.free.lock().unwrap();
            while *free == 0 {
                free = self.cv.wait(free).unwrap();
            }
            *free -= 1;
        }
        let out = f();
        *self.free.lock().unwrap() += 1;
        self.cv.notify_one();
        out
    }
}

/// Repairs every job on a bounded worker pool. Records reach `sink` in job
/// order regardless of completion order. Setting `stop` lets in-flight jobs
/// finish and starts no new ones.
pub fn run_campaign(
    jobs: &[Job],
    model: &dyn ChatModel,
    opts: &CampaignOptions,
    stop: &AtomicBool,
    mut sink: impl FnMut(&AttemptRecord) -> io::Result<()>,
) -> io::Result<CampaignStats> {
    let next = AtomicUsize::new(0);
    let oracle_slots = Semaphore::new(opts.oracle_concurrency);
    // Runs against the same sample share its checkout, so they go one at a time.
    let sample_locks: HashMap<&str, Mutex<()>> =
        jobs.iter().map(|j| (j.sample.id.as_str(), Mutex::new(()))).collect();
    let (tx, rx) = mpsc::channel::<(usize, AttemptRecord)>();
    let mut stats = CampaignStats::default();
    let mut sink_error = None;

    thread::scope(|scope| {
        for _ in 0..opts.max_concurrency.max(1).min(jobs.len().max(1)) {
            let tx = tx.clone();
            let (next, oracle_slots, sample_locks) = (&next, &oracle_slots, &sample_locks);
            scope.spawn(move || loop {
                if stop.load(Ordering::SeqCst) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(job) = jobs.get(i) else { break };
                let (attempt, verdict) = repair_with(&job.mutant, model, &opts.template, |patch| {
                    let _guard = sample_locks[job.sample.id.as_str()].lock().unwrap();
                    oracle_slots.run(|| run_oracle(&job.oracle, patch, &job.mutant.id, job.sample_dir.as_deref()))
                });
                let mut record = attempt_record(&job.mutant, &job.sample, &attempt, &verdict, &opts.model_name);
                if let Some(dir) = &opts.artifacts_dir {
                    if let Err(e) = attempt.persist(&dir.join(&job.mutant.id)) {
                        record.outcome = Outcome::Error;
                        record.detail = format!("persisting artifacts: {e}");
                    }
                }
                if tx.send((i, record)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<usize, AttemptRecord> = BTreeMap::new();
        let mut emitted = 0usize;
        let mut emit = |rec: &AttemptRecord, stats: &mut CampaignStats| {
            match rec.outcome {
                Outcome::Valid => stats.valid += 1,
                Outcome::Invalid => stats.invalid += 1,
                Outcome::Error => stats.error += 1,
            }
            if sink_error.is_none() {
                if let Err(e) = sink(rec) {
                    sink_error = Some(e);
                    stop.store(true, Ordering::SeqCst);
                }
            }
        };
        for (i, rec) in rx {
            pending.insert(i, rec);
            while let Some(rec) = pending.remove(&emitted) {
                emit(&rec, &mut stats);
                emitted += 1;
            }
        }
        // After a stop the finished jobs may not be contiguous.
        for rec in pending.into_values() {
            emit(&rec, &mut stats);
        }
    });

    if let Some(e) = sink_error {
        return Err(e);
    }
    stats.skipped = jobs.len() - stats.attempted();
    Ok(stats)
}
