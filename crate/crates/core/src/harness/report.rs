use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{HarnessError, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A precondition or computation failed; recorded, not fatal.
    Error,
}

/// One row of a per-trial table; the CSV output has one line per record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    pub module: String,
    pub op: String,
    pub label: String,
    pub verdict: Verdict,
    pub detail: serde_json::Value,
    pub trials: Vec<TrialRecord>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl Summary {
    pub fn of(items: &[ReportItem]) -> Self {
        let count = |v: Verdict| items.iter().filter(|i| i.verdict == v).count();
        Self {
            total: items.len(),
            passed: count(Verdict::Pass),
            failed: count(Verdict::Fail),
            errors: count(Verdict::Error),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub suites: Vec<Suite>,
    pub master_seed: u64,
    pub tool_version: String,
    /// SHA-256 of the canonical JSON of the configuration.
    pub config_hash: String,
    pub summary: Summary,
    pub items: Vec<ReportItem>,
    /// Excluded from `report_hash`, and omitted entirely when timing is off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

impl ExperimentReport {
    /// Hash of everything except the wall clock.
    pub fn report_hash(&self) -> String {
        let mut stripped = self.clone();
        stripped.wall_clock_ms = None;
        let text = serde_json::to_vec(&stripped).expect("report serializes");
        hex::encode(Sha256::digest(&text))
    }

    pub fn module_summaries(&self) -> BTreeMap<String, Summary> {
        let mut by: BTreeMap<String, Vec<ReportItem>> = BTreeMap::new();
        for item in &self.items {
            by.entry(item.module.clone())
                .or_default()
                .push(item.clone());
        }
        by.into_iter().map(|(k, v)| (k, Summary::of(&v))).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

pub fn emit_report(r: &ExperimentReport, format: ReportFormat) -> Result<String, HarnessError> {
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(r)? + "\n"),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["module", "op", "label", "trial", "seed", "value", "pass"])?;
            for item in &r.items {
                for t in &item.trials {
                    w.write_record([
                        item.module.as_str(),
                        item.op.as_str(),
                        item.label.as_str(),
                        &t.trial.to_string(),
                        &t.seed.to_string(),
                        &t.value.to_string(),
                        &t.pass.to_string(),
                    ])?;
                }
            }
            let bytes = w
                .into_inner()
                .map_err(|e| HarnessError::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Markdown => {
            let s = &r.summary;
            let mut out = format!(
                "# Report\n\nseed {} | {} items: {} passed, {} failed, {} errors\n\n",
                r.master_seed, s.total, s.passed, s.failed, s.errors
            );
            out.push_str("| module | op | label | verdict |\n|---|---|---|---|\n");
            for item in &r.items {
                let verdict = match item.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Error => "ERROR",
                };
                out.push_str(&format!(
                    "| {} | {} | {} | {} |\n",
                    item.module,
                    item.op,
                    item.label.replace('|', "\\|"),
                    verdict
                ));
            }
            Ok(out)
        }
    }
}

pub fn write_report(
    r: &ExperimentReport,
    format: ReportFormat,
    path: &Path,
) -> Result<(), HarnessError> {
    let text = emit_report(r, format)?;
    std::fs::write(path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}
