use std::process::{Command, Output};

fn equilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equilab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(code(&equilab(&["suite"])), 2);
    assert_eq!(code(&equilab(&["suite", "nonsense"])), 2);
    assert_eq!(
        code(&equilab(&[
            "genericdim",
            "--config",
            "so_pq:9",
            "--w",
            "flag:1",
            "--wprime",
            "flag:0"
        ])),
        2
    );
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"suites": []}"#).unwrap();
    assert_eq!(
        code(&equilab(&["suite", "--config", cfg.to_str().unwrap()])),
        2
    );
    std::fs::write(&cfg, r#"{"suites": ["bl"], "unknown_key": 1}"#).unwrap();
    assert_eq!(
        code(&equilab(&["suite", "--config", cfg.to_str().unwrap()])),
        2
    );
}

#[test]
fn genericdim_report_shape() {
    let o = equilab(&[
        "genericdim",
        "--config",
        "sl2_sym:2",
        "--w",
        "flag:2",
        "--wprime",
        "flag:0",
        "--trials",
        "12",
        "--seed",
        "42",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in [
        "config",
        "W",
        "W'",
        "trials",
        "passes",
        "histogram",
        "failures",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["trials"], 12);
    assert_eq!(v["passes"], 12);
}

#[test]
fn bl_check_and_estimate() {
    let dir = tempfile::tempdir().unwrap();
    let ok = dir.path().join("holder.json");
    std::fs::write(
        &ok,
        r#"{"n": 2, "maps": [{"nj": 2, "matrix": [["1","0"],["0","1"]]}, {"nj": 2, "matrix": [["1","0"],["0","1"]]}], "exponents": ["1/2", "1/2"]}"#,
    )
    .unwrap();
    let o = equilab(&["bl", "check", "--datum", ok.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = equilab(&[
        "bl",
        "estimate",
        "--datum",
        ok.to_str().unwrap(),
        "--budget",
        "300",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["lower_bound_variational"].as_f64().unwrap() > 0.99);

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"n": 2, "maps": [{"nj": 1, "matrix": [["1","0"]]}], "exponents": ["2"]}"#,
    )
    .unwrap();
    let o = equilab(&["bl", "check", "--datum", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"]["status"], "violated");
}

#[test]
fn oppenheim_single_and_curve() {
    let o = equilab(&[
        "oppenheim",
        "--form",
        "x1^2+x2^2-sqrt2*x3^2",
        "--s",
        "0",
        "--T",
        "10",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["t_bound"], 10);
    let o = equilab(&["oppenheim", "--form", "x1^2-x3^2", "--T", "5,10,20"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(
        code(&equilab(&["oppenheim", "--form", "x1^2+x2^2", "--T", "5"])),
        2
    );
}

#[test]
fn proj_exp_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let csv = dir.path().join("u.csv");
    let o = equilab(&[
        "proj-exp",
        "--config",
        "so_pq:2,1",
        "--fractal",
        "grid:4:5",
        "--mu",
        "0",
        "--delta",
        "4",
        "--epsilon",
        "0.05",
        "--num-u",
        "5",
        "--seed",
        "3",
        "--mode",
        "subcritical",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(
        matches!(code(&o), 0 | 1),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["num_u"], 5);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 6);
}

#[test]
fn suite_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"suites": ["hypotheses", "oppenheim"], "master_seed": 9, "oppenheim": {"t_list": [5, 10, 20], "threshold": 1.0}}"#,
    )
    .unwrap();
    let run = |name: &str, format: &str| {
        let out = dir.path().join(name);
        let o = equilab(&[
            "suite",
            "--config",
            cfg.to_str().unwrap(),
            "--format",
            format,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let a = run("a.json", "json");
    let b = run("b.json", "json");
    assert_eq!(a, b);
    let csv = String::from_utf8(run("a.csv", "csv")).unwrap();
    assert!(csv.starts_with("module,op,label,trial,seed,value,pass"));
    let md = String::from_utf8(run("a.md", "markdown")).unwrap();
    assert!(md.contains("| rep | hypotheses | so_pq:2,1 | pass |"));
}

#[test]
fn suite_failures_exit_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    // Threshold below what T <= 20 can reach.
    std::fs::write(
        &cfg,
        r#"{"suites": ["oppenheim"], "oppenheim": {"t_list": [5, 10, 20], "threshold": 1e-9}}"#,
    )
    .unwrap();
    let o = equilab(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["failed"], 1);
}
