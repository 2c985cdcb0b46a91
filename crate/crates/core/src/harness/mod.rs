//! Driving a chat model over mutants and judging its patches with a test oracle.

mod campaign;
mod mock;
mod model;
mod oracle;

use std::fs;
use std::io;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::mr::RenameMap;
use crate::mutant::{BaseSample, ComboSpec, Mutant};
use crate::syntax::lexer::{tokenize, TokenKind};
use crate::syntax::{find_nodes, parse_java};

pub use campaign::{run_campaign, CampaignOptions, CampaignStats, Job};
pub use mock::{MockRule, MockScript, MockServer};
pub use model::{ChatModel, HttpModel, ModelEndpointConfig, ModelError};
pub use oracle::{run_oracle, OracleConfig};

pub const CODE_PLACEHOLDER: &str = "{code}";

pub const DEFAULT_TEMPLATE: &str = "The following Java code contains a bug. Fix the bug. \
Return only the complete fixed function in a single fenced code block (```java ... ```).\n\n\
{code}\n";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("prompt template has no {{code}} placeholder")]
pub struct TemplateError;

pub fn check_template(template: &str) -> Result<(), TemplateError> {
    if template.contains(CODE_PLACEHOLDER) { Ok(()) } else { Err(TemplateError) }
}

pub fn build_prompt(code: &str, template: &str) -> Result<String, TemplateError> {
    check_template(template)?;
    Ok(template.replace(CODE_PLACEHOLDER, code))
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Contents of the first fenced code block. Without a fence, the longest run of
/// lines that parses cleanly as a method or type declaration.
pub fn extract_patch(response: &str) -> Option<String> {
    if let Some(block) = first_fence(response) {
        return Some(block);
    }
    longest_declaration(response)
}

fn first_fence(text: &str) -> Option<String> {
    let mut lines = text.split_inclusive('\n');
    let mut body = String::new();
    let mut open: Option<&str> = None;
    for line in lines.by_ref() {
        let trimmed = line.trim_start();
        match open {
            None => {
                if let Some(rest) = trimmed.strip_prefix("```").or_else(|| trimmed.strip_prefix("~~~")) {
                    // The tag may not contain a second fence on the same line.
                    if !rest.contains("```") {
                        open = Some(&trimmed[..3]);
                    }
                }
            }
            Some(fence) => {
                if trimmed.trim_end() == fence {
                    if body.ends_with('\n') {
                        body.pop();
                        if body.ends_with('\r') {
                            body.pop();
                        }
                    }
                    return Some(body);
                }
                body.push_str(line);
            }
        }
    }
    // An unterminated fence still carries the code.
    open.map(|_| body.trim_end().to_string())
}

const MAX_FALLBACK_LINES: usize = 200;

fn longest_declaration(text: &str) -> Option<String> {
    let lines: Vec<&str> = text.lines().take(MAX_FALLBACK_LINES).collect();
    let mut best: Option<String> = None;
    for i in 0..lines.len() {
        for j in (i..lines.len()).rev() {
            if !lines[j].trim_end().ends_with('}') {
                continue;
            }
            let candidate = lines[i..=j].join("\n");
            if best.as_ref().is_some_and(|b| b.len() >= candidate.len()) {
                break;
            }
            if parses_as_declaration(&candidate) {
                best = Some(candidate);
                break;
            }
        }
    }
    best
}

fn parses_as_declaration(text: &str) -> bool {
    let Ok(tree) = parse_java(text) else { return false };
    if tree.has_errors() {
        return false;
    }
    ["method_declaration", "class_declaration", "constructor_declaration", "interface_declaration", "enum_declaration", "record_declaration"]
        .iter()
        .any(|k| !find_nodes(&tree, k).is_empty())
}

/// Maps renamed identifiers back to their original names. Only identifier
/// tokens are touched, never literals, comments or longer identifiers.
pub fn reverse_rename(patch: &str, map: &RenameMap) -> String {
    if map.is_empty() {
        return patch.to_string();
    }
    let inverse = map.inverse();
    let mut out = String::with_capacity(patch.len());
    for tok in tokenize(patch) {
        let text = tok.text(patch);
        match inverse.get(text) {
            Some(orig) if tok.kind == TokenKind::Identifier => out.push_str(orig),
            _ => out.push_str(text),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Valid,
    Invalid,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub mutant_id: String,
    pub outcome: Outcome,
    pub detail: String,
}

impl Verdict {
    pub fn new(mutant_id: &str, outcome: Outcome, detail: impl Into<String>) -> Self {
        Verdict { mutant_id: mutant_id.to_string(), outcome, detail: detail.into() }
    }
}

/// Everything produced while repairing one mutant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairAttempt {
    pub mutant_id: String,
    pub prompt: String,
    pub raw_response: Option<String>,
    pub extracted_patch: Option<String>,
    pub reversed_patch: Option<String>,
    pub latency_ms: u64,
}

impl RepairAttempt {
    /// Writes the prompt, response and patches into `dir`.
    pub fn persist(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("prompt.txt"), &self.prompt)?;
        let files = [
            ("response.txt", &self.raw_response),
            ("patch.java", &self.extracted_patch),
            ("reversed.java", &self.reversed_patch),
        ];
        for (name, content) in files {
            if let Some(c) = content {
                fs::write(dir.join(name), c)?;
            }
        }
        Ok(())
    }
}

/// One line of `attempts.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub mutant_id: String,
    pub base_id: String,
    pub combo: ComboSpec,
    pub pd: usize,
    pub outcome: Outcome,
    pub detail: String,
    pub prompt_hash: String,
    pub response_hash: Option<String>,
    pub latency_ms: u64,
    /// Milliseconds since the Unix epoch.
    pub timestamp: u64,
    #[serde(default)]
    pub model: String,
    #[serde(default = "unknown")]
    pub repair_pattern: String,
    #[serde(default)]
    pub dataset: String,
    /// Token edit distance between the mutant and its base.
    #[serde(default)]
    pub edit_distance: Option<usize>,
}

fn unknown() -> String {
    "unknown".to_string()
}

pub(crate) fn now_millis() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

/// prompt, model, extraction, reverse renaming, oracle.
pub fn repair_mutant(
    mutant: &Mutant,
    model: &dyn ChatModel,
    oracle: &OracleConfig,
    template: &str,
    sample_dir: Option<&Path>,
) -> (RepairAttempt, Verdict) {
    repair_with(mutant, model, template, |patch| run_oracle(oracle, patch, &mutant.id, sample_dir))
}

pub(crate) fn repair_with(
    mutant: &Mutant,
    model: &dyn ChatModel,
    template: &str,
    oracle: impl FnOnce(&str) -> Verdict,
) -> (RepairAttempt, Verdict) {
    let mut attempt = RepairAttempt {
        mutant_id: mutant.id.clone(),
        prompt: String::new(),
        raw_response: None,
        extracted_patch: None,
        reversed_patch: None,
        latency_ms: 0,
    };
    let prompt = match build_prompt(&mutant.text, template) {
        Ok(p) => p,
        Err(e) => return (attempt, Verdict::new(&mutant.id, Outcome::Error, e.to_string())),
    };
    attempt.prompt = prompt;
    let started = Instant::now();
    let response = model.complete(&attempt.prompt);
    attempt.latency_ms = started.elapsed().as_millis() as u64;
    let response = match response {
        Ok(r) => r,
        Err(e) => return (attempt, Verdict::new(&mutant.id, Outcome::Error, e.to_string())),
    };
    attempt.extracted_patch = extract_patch(&response);
    attempt.raw_response = Some(response);
    let Some(patch) = &attempt.extracted_patch else {
        return (attempt, Verdict::new(&mutant.id, Outcome::Invalid, "no patch"));
    };
    let reversed = reverse_rename(patch, &mutant.rename_map);
    let verdict = oracle(&reversed);
    attempt.reversed_patch = Some(reversed);
    (attempt, verdict)
}

/// Record for a finished attempt.
pub fn attempt_record(
    mutant: &Mutant,
    sample: &BaseSample,
    attempt: &RepairAttempt,
    verdict: &Verdict,
    model_name: &str,
) -> AttemptRecord {
    AttemptRecord {
        mutant_id: mutant.id.clone(),
        base_id: mutant.base_id.clone(),
        combo: mutant.combo.clone(),
        pd: mutant.pd,
        outcome: verdict.outcome,
        detail: verdict.detail.clone(),
        prompt_hash: sha256_hex(&attempt.prompt),
        response_hash: attempt.raw_response.as_deref().map(sha256_hex),
        latency_ms: attempt.latency_ms,
        timestamp: now_millis(),
        model: model_name.to_string(),
        repair_pattern: sample.repair_pattern.clone(),
        dataset: sample.dataset.clone(),
        edit_distance: Some(crate::metrics::edit_distance(&sample.source, &mutant.text)),
    }
}
