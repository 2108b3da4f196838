//! Runs verification suites from code and prints the markdown summary.
//!
//!     cargo run --release --example run_suite -- hypotheses oppenheim

use equilab::harness::{emit_report, run_suite, ReportFormat, Suite, SuiteConfig};

fn main() {
    let suites: Vec<Suite> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("suite name"))
        .collect();
    let mut cfg = SuiteConfig {
        suites: if suites.is_empty() {
            vec![Suite::Hypotheses, Suite::Oppenheim]
        } else {
            suites
        },
        master_seed: 42,
        ..SuiteConfig::default()
    };
    cfg.oppenheim.t_list = vec![10, 30, 100];
    cfg.oppenheim.threshold = 0.1;
    let report = run_suite(&cfg, 1).unwrap();
    print!("{}", emit_report(&report, ReportFormat::Markdown).unwrap());
    println!("\nreport hash {}", report.report_hash());
}
