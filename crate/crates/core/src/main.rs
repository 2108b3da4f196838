use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use equilab::bl::{
    check_feasibility, estimate_bl_constant, BLDatum, EstimateOptions, FeasibilityMode,
};
use equilab::discretized::{
    generate_fractal, projection_experiment, FractalDesc, ProjectionMode, ProjectionParams,
};
use equilab::generic_dim::{check_intersection_bound, SubspaceSpec};
use equilab::harness::{run_suite, write_report, ReportFormat, Suite, SuiteConfig};
use equilab::linalg::{parse_rat, Rat};
use equilab::oppenheim::{decay_curve, search_min_value, QuadraticForm};
use equilab::rep::{build_config, weight_decompose, ConfigKind};

#[derive(Parser)]
#[command(
    name = "equilab",
    version,
    about = "Generic-dimension, Brascamp-Lieb and projection experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Irreducibility and proximality of the built-in configurations.
    Hypotheses {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "markdown")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Intersection bound for one pair of subspaces.
    Genericdim {
        #[arg(long)]
        config: ConfigKind,
        #[arg(long)]
        w: SubspaceSpec,
        #[arg(long)]
        wprime: SubspaceSpec,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brascamp-Lieb feasibility and constant estimates.
    Bl {
        #[command(subcommand)]
        cmd: BlCmd,
    },
    /// Exceptional set of projections of a fractal under sampled unipotents.
    ProjExp {
        #[arg(long)]
        config: ConfigKind,
        #[arg(long)]
        fractal: FractalDesc,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Scale exponent: delta = 2^-delta.
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        m_exponent: f64,
        #[arg(long, default_value_t = 200)]
        num_u: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "subcritical")]
        mode: ProjectionMode,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-u rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Smallest |Q(v) - s| over the integer box of radius T.
    Oppenheim {
        #[arg(long)]
        form: QuadraticForm,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        s: String,
        /// One or more box radii, comma separated.
        #[arg(long = "T", value_delimiter = ',', required = true)]
        t: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs named suites; a --config file replaces the flags.
    Suite {
        #[arg(value_enum)]
        suites: Vec<Suite>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Record wall-clock time (reports are then no longer byte-identical).
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum BlCmd {
    Check {
        #[arg(long)]
        datum: PathBuf,
    },
    Estimate {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Usage or configuration problems exit with 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Fatal> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Fatal(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_datum(path: &Path) -> Result<BLDatum, Fatal> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn run(cmd: Cmd) -> Result<bool, Fatal> {
    match cmd {
        Cmd::Hypotheses { seed, format, out } => {
            let cfg = SuiteConfig {
                suites: vec![Suite::Hypotheses],
                master_seed: seed,
                ..SuiteConfig::default()
            };
            suite_output(&cfg, 1, format, out.as_deref())
        }
        Cmd::Genericdim {
            config,
            w,
            wprime,
            trials,
            seed,
            out,
        } => {
            let cfg = build_config(config)?;
            let dec = weight_decompose(&cfg)?;
            let (ws, wps) = (
                w.resolve(&dec, seed)?,
                wprime.resolve(&dec, seed.wrapping_add(1))?,
            );
            let r = check_intersection_bound(&cfg, &ws, &wps, trials, seed)?;
            let ok = r.all_pass();
            emit(
                &serde_json::json!({
                    "config": config.to_string(),
                    "W": w.to_string(),
                    "W'": wprime.to_string(),
                    "trials": r.trials,
                    "passes": r.passes,
                    "histogram": r.dimension_histogram,
                    "failures": r.witness_failures,
                }),
                out.as_deref(),
            )?;
            Ok(ok)
        }
        Cmd::Bl {
            cmd: BlCmd::Check { datum },
        } => {
            let d = load_datum(&datum)?;
            let cert = check_feasibility(&d, FeasibilityMode::Lattice)?;
            emit(&cert, None)?;
            Ok(cert.is_feasible())
        }
        Cmd::Bl {
            cmd:
                BlCmd::Estimate {
                    datum,
                    budget,
                    seed,
                },
        } => {
            let d = load_datum(&datum)?;
            let e = estimate_bl_constant(&d, EstimateOptions::new(budget, seed))?;
            emit(&e, None)?;
            Ok(true)
        }
        Cmd::ProjExp {
            config,
            fractal,
            mu,
            delta,
            epsilon,
            m_exponent,
            num_u,
            seed,
            mode,
            out,
            csv,
        } => {
            let cfg = build_config(config)?;
            let f = generate_fractal(&fractal, seed)?;
            let params = ProjectionParams {
                mu: parse_rat(&mu)?,
                s: delta,
                epsilon,
                m_exponent,
                num_u,
                seed,
                mode,
            };
            let r = projection_experiment(&cfg, &f, &params)?;
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["index", "covering", "exceptional", "t"])?;
                for row in &r.per_u {
                    let t: Vec<String> = row.t.iter().map(f64::to_string).collect();
                    w.write_record([
                        row.index.to_string(),
                        row.covering.to_string(),
                        row.exceptional.to_string(),
                        t.join(" "),
                    ])?;
                }
                w.flush()?;
            }
            emit(&r, out.as_deref())?;
            Ok(r.passes)
        }
        Cmd::Oppenheim { form, s, t, out } => {
            let s: Rat = parse_rat(&s)?;
            if let [single] = t.as_slice() {
                emit(&search_min_value(&form, &s, *single)?, out.as_deref())?;
            } else {
                emit(&decay_curve(&form, &s, &t)?, out.as_deref())?;
            }
            Ok(true)
        }
        Cmd::Suite {
            suites,
            config,
            seed,
            format,
            out,
            jobs,
            timing,
        } => {
            let cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
                    SuiteConfig::from_json(&text)?
                }
                None => {
                    if suites.is_empty() {
                        return Err(Fatal("name at least one suite or pass --config".into()));
                    }
                    SuiteConfig {
                        suites,
                        master_seed: seed,
                        timing,
                        output: out.clone(),
                        ..SuiteConfig::default()
                    }
                }
            };
            let out = out.or_else(|| cfg.output.clone());
            suite_output(&cfg, jobs, format, out.as_deref())
        }
    }
}

fn suite_output(
    cfg: &SuiteConfig,
    jobs: usize,
    format: ReportFormat,
    out: Option<&Path>,
) -> Result<bool, Fatal> {
    let report = run_suite(cfg, jobs)?;
    match out {
        Some(p) => write_report(&report, format, p)?,
        None => print!("{}", equilab::harness::emit_report(&report, format)?),
    }
    let s = &report.summary;
    eprintln!(
        "{} items: {} passed, {} failed, {} errors",
        s.total, s.passed, s.failed, s.errors
    );
    Ok(s.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
