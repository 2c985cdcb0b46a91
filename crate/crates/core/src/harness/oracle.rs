use std::fs;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use wait_timeout::ChildExt;

use super::{Outcome, Verdict};

/// How to run a sample's test suite against a patch. The command is an argv
/// list, never a shell string. Placeholders: `{patch_file}`, `{workdir}`,
/// `{sample_dir}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub command: Vec<String>,
    #[serde(default = "default_timeout")]
    pub timeout: f64,
    /// File name the patch is written to inside the workdir.
    #[serde(default = "default_patch_name")]
    pub patch_name: String,
}

fn default_timeout() -> f64 {
    60.0
}

fn default_patch_name() -> String {
    "Patch.java".to_string()
}

impl OracleConfig {
    pub fn new(command: Vec<String>) -> Self {
        OracleConfig { command, timeout: default_timeout(), patch_name: default_patch_name() }
    }
}

fn substitute(arg: &str, patch: &Path, workdir: &Path, sample_dir: Option<&Path>) -> String {
    let mut out = arg
        .replace("{patch_file}", &patch.to_string_lossy())
        .replace("{workdir}", &workdir.to_string_lossy());
    if let Some(dir) = sample_dir {
        out = out.replace("{sample_dir}", &dir.to_string_lossy());
    }
    out
}

/// Runs the oracle in a fresh scratch directory. Exit 0 is valid, any other
/// exit is invalid, a timeout or spawn failure is an error.
pub fn run_oracle(config: &OracleConfig, patch: &str, mutant_id: &str, sample_dir: Option<&Path>) -> Verdict {
    let error = |detail: String| Verdict::new(mutant_id, Outcome::Error, detail);
    if config.command.is_empty() {
        return error("empty oracle command".into());
    }
    if !(config.timeout > 0.0) {
        return error("oracle timeout must be positive".into());
    }
    let workdir = match tempfile::Builder::new().prefix("morphrepair-").tempdir() {
        Ok(d) => d,
        Err(e) => return error(format!("workdir: {e}")),
    };
    let patch_file = workdir.path().join(&config.patch_name);
    if let Err(e) = fs::write(&patch_file, patch) {
        return error(format!("writing patch: {e}"));
    }
    let argv: Vec<String> = config
        .command
        .iter()
        .map(|a| substitute(a, &patch_file, workdir.path(), sample_dir))
        .collect();
    let log = |name: &str| fs::File::create(workdir.path().join(name)).map(Stdio::from);
    let (Ok(stdout), Ok(stderr)) = (log(".oracle.out"), log(".oracle.err")) else {
        return error("cannot create oracle log files".into());
    };
    let mut child = match Command::new(&argv[0])
        .args(&argv[1..])
        .current_dir(workdir.path())
        .stdin(Stdio::null())
        .stdout(stdout)
        .stderr(stderr)
        .spawn()
    {
        Ok(c) => c,
        Err(e) => return error(format!("spawn {}: {e}", argv[0])),
    };
    match child.wait_timeout(Duration::from_secs_f64(config.timeout)) {
        Ok(Some(status)) if status.success() => Verdict::new(mutant_id, Outcome::Valid, "tests passed"),
        Ok(Some(status)) => {
            let tail = fs::read_to_string(workdir.path().join(".oracle.err")).unwrap_or_default();
            let tail: String = tail.lines().rev().take(3).collect::<Vec<_>>().into_iter().rev().collect::<Vec<_>>().join(" | ");
            let code = status.code().map_or("signal".to_string(), |c| c.to_string());
            let detail = if tail.is_empty() { format!("exit {code}") } else { format!("exit {code}: {tail}") };
            Verdict::new(mutant_id, Outcome::Invalid, detail)
        }
        Ok(None) => {
            let _ = child.kill();
            let _ = child.wait();
            error("timeout".into())
        }
        Err(e) => {
            let _ = child.kill();
            let _ = child.wait();
            error(format!("wait: {e}"))
        }
    }
}
