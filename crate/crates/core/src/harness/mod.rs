//! Named verification suites, reproducible seeding and report output.

mod report;
mod suites;

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use report::{
    emit_report, write_report, ExperimentReport, ReportFormat, ReportItem, Summary, TrialRecord,
    Verdict,
};
pub use suites::bl_agreement_corpus;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<serde_json::Error> for HarnessError {
    fn from(e: serde_json::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hypotheses,
    GenericDim,
    Bl,
    Discretized,
    Oppenheim,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 5] = [
        Suite::Hypotheses,
        Suite::GenericDim,
        Suite::Bl,
        Suite::Discretized,
        Suite::Oppenheim,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hypotheses => "hypotheses",
            Suite::GenericDim => "generic-dim",
            Suite::Bl => "bl",
            Suite::Discretized => "discretized",
            Suite::Oppenheim => "oppenheim",
            Suite::All => "all",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Suite::CONCRETE
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s.trim())
            .copied()
            .ok_or_else(|| HarnessError::Usage(format!("unknown suite {s:?}")))
    }
}

fn default_configs() -> Vec<String> {
    [
        "so_pq:2,1",
        "so_pq:2,2",
        "so_pq:3,1",
        "sp2n:2",
        "tensor:2,2",
        "sl2_sym:4",
    ]
    .map(String::from)
    .to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanePair {
    pub config: String,
    pub w: String,
    pub w_prime: String,
    pub expected_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenericParams {
    pub trials: usize,
    /// Pairs where the bound should hold with equality on every trial.
    pub plane_pairs: Vec<PlanePair>,
    pub spanning_trials: usize,
    pub spanning_configs: Vec<String>,
    pub submodularity: usize,
    pub duality: usize,
}

impl Default for GenericParams {
    fn default() -> Self {
        let mut spanning_configs = default_configs();
        spanning_configs.push("sl2_sym:2".into());
        Self {
            trials: 200,
            // R^2 (x) e1 against e1 (x) R^2: every translate meets in a line.
            plane_pairs: vec![PlanePair {
                config: "tensor_std:2,2".into(),
                w: "coords:2,3".into(),
                w_prime: "coords:1,3".into(),
                expected_dim: 1,
            }],
            spanning_trials: 20,
            spanning_configs,
            submodularity: 1000,
            duality: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlParams {
    pub budget: usize,
    /// Random Gaussian inputs tried per datum in the quadrature check.
    pub quadrature_inputs: usize,
    pub quadrature_points: usize,
    pub corpus: bool,
}

impl Default for BlParams {
    fn default() -> Self {
        Self {
            budget: 2000,
            quadrature_inputs: 5,
            quadrature_points: 61,
            corpus: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectionSuiteParams {
    pub config: String,
    pub fractal: String,
    pub mu: String,
    pub s: u32,
    pub epsilon: f64,
    pub m_exponent: f64,
    pub num_u: usize,
    pub mode: crate::discretized::ProjectionMode,
    /// Full grid run through the same experiment; expected to have no exceptions.
    pub control_fractal: String,
    pub control_s: u32,
}

impl Default for ProjectionSuiteParams {
    fn default() -> Self {
        Self {
            config: "so_pq:2,1".into(),
            fractal: "weight_aligned:1,1,0.5,0,0".into(),
            mu: "0".into(),
            s: 10,
            epsilon: 0.05,
            m_exponent: 1.0,
            num_u: 200,
            mode: crate::discretized::ProjectionMode::Subcritical,
            control_fractal: "grid:4:5".into(),
            control_s: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscretizedParams {
    pub frostman_sets: usize,
    pub frostman_s: u32,
    /// `(alpha, beta)` pairs.
    pub frostman_exponents: Vec<(f64, f64)>,
    pub projection: ProjectionSuiteParams,
    pub remez_polys: usize,
    pub remez_samples: usize,
    pub remez_eps: f64,
}

impl Default for DiscretizedParams {
    fn default() -> Self {
        Self {
            frostman_sets: 50,
            frostman_s: 8,
            frostman_exponents: vec![(1.0, 0.5), (2.5, 2.0)],
            projection: ProjectionSuiteParams::default(),
            remez_polys: 100,
            remez_samples: 100_000,
            remez_eps: 0.05,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OppenheimParams {
    pub form: String,
    pub s: String,
    pub t_list: Vec<i64>,
    pub threshold: f64,
    /// Rational isotropic form whose minimum must be exactly zero.
    pub control_form: String,
    pub control_t: i64,
}

impl Default for OppenheimParams {
    fn default() -> Self {
        Self {
            form: "x1^2+x2^2-sqrt2*x3^2".into(),
            s: "0".into(),
            t_list: vec![10, 100, 1000],
            threshold: 0.05,
            control_form: "x1^2-x3^2".into(),
            control_t: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub master_seed: u64,
    pub configs: Vec<String>,
    pub generic: GenericParams,
    pub bl: BlParams,
    pub discretized: DiscretizedParams,
    pub oppenheim: OppenheimParams,
    /// Record wall-clock time in the report. Off by default so that equal
    /// configs give byte-identical reports.
    pub timing: bool,
    /// Not part of the config hash.
    pub output: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suites: vec![Suite::All],
            master_seed: 0,
            configs: default_configs(),
            generic: GenericParams::default(),
            bl: BlParams::default(),
            discretized: DiscretizedParams::default(),
            oppenheim: OppenheimParams::default(),
            timing: false,
            output: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: SuiteConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.suites.is_empty() {
            return Err(HarnessError::Usage("no suite selected".into()));
        }
        if self.oppenheim.t_list.is_empty() {
            return Err(HarnessError::Config("oppenheim.t_list is empty".into()));
        }
        Ok(())
    }

    /// Suites to run, in canonical order, with `all` expanded.
    pub fn expanded_suites(&self) -> Vec<Suite> {
        let mut out: Vec<Suite> = if self.suites.contains(&Suite::All) {
            Suite::CONCRETE.to_vec()
        } else {
            self.suites.clone()
        };
        out.sort();
        out.dedup();
        out
    }

    pub fn config_hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        hex::encode(Sha256::digest(
            serde_json::to_vec(&c).expect("config serializes"),
        ))
    }
}

/// `hash(master_seed, module, op, index)`: adding or reordering items in one
/// suite never changes the seeds of another.
pub fn derive_seed(master_seed: u64, module: &str, op: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update(module.as_bytes());
    h.update([0]);
    h.update(op.as_bytes());
    h.update([0]);
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Runs the selected suites on `jobs` worker threads (1 = sequential).
/// Item failures are recorded in the report, never returned as errors.
pub fn run_suite(cfg: &SuiteConfig, jobs: usize) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HarnessError::Usage(e.to_string()))?;
    let start = Instant::now();
    let suites = cfg.expanded_suites();
    let items: Vec<ReportItem> =
        pool.install(|| suites.iter().flat_map(|s| suites::run(*s, cfg)).collect());
    Ok(ExperimentReport {
        suites,
        master_seed: cfg.master_seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: cfg.config_hash(),
        summary: Summary::of(&items),
        items,
        wall_clock_ms: cfg.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_separated_by_every_component() {
        let base = derive_seed(1, "bl", "estimate", 0);
        assert_eq!(base, derive_seed(1, "bl", "estimate", 0));
        assert_ne!(base, derive_seed(2, "bl", "estimate", 0));
        assert_ne!(base, derive_seed(1, "bl", "estimat", 0));
        assert_ne!(base, derive_seed(1, "bl", "estimate", 1));
        assert_ne!(derive_seed(1, "ab", "c", 0), derive_seed(1, "a", "bc", 0));
    }

    #[test]
    fn config_parsing() {
        let cfg = SuiteConfig::from_json(r#"{"suites": ["generic-dim", "bl"], "master_seed": 5}"#)
            .unwrap();
        assert_eq!(cfg.expanded_suites(), vec![Suite::GenericDim, Suite::Bl]);
        assert_eq!(cfg.generic.trials, 200);
        assert!(matches!(
            SuiteConfig::from_json(r#"{"suites": []}"#),
            Err(HarnessError::Usage(_))
        ));
        assert!(matches!(
            SuiteConfig::from_json(r#"{"suites": ["nope"]}"#),
            Err(HarnessError::Config(_))
        ));
        assert!(SuiteConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert_eq!(SuiteConfig::default().expanded_suites().len(), 5);
        assert_eq!("generic-dim".parse::<Suite>().unwrap(), Suite::GenericDim);
        assert!("x".parse::<Suite>().is_err());
    }

    #[test]
    fn output_path_does_not_change_the_hash() {
        let a = SuiteConfig::default();
        let mut b = a.clone();
        b.output = Some("elsewhere.json".into());
        assert_eq!(a.config_hash(), b.config_hash());
        b.master_seed = 1;
        assert_ne!(a.config_hash(), b.config_hash());
    }
}
