use proptest::prelude::*;

use equilab::bl::{gaussian_ratio, BLDatum, BLMap};
use equilab::discretized::{covering_number, PointSet};
use equilab::generic_dim::submodularity_check;
use equilab::harness::{
    derive_seed, emit_report, ExperimentReport, ReportFormat, ReportItem, Summary, TrialRecord,
    Verdict,
};
use equilab::linalg::{
    canonicalize, format_rat, int, parse_rat, rat, subspace_intersect, subspace_sum, Mat, Rat,
    Subspace,
};
use equilab::oppenheim::{search_min_value, QuadRat, QuadraticForm};
use nalgebra::DMatrix;
use num_traits::Signed;

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, n), 1..=n).prop_map(move |vs| {
        let vs: Vec<Vec<Rat>> = vs
            .into_iter()
            .map(|v| v.into_iter().map(int).collect())
            .collect();
        Subspace::from_vectors(n, &vs)
    })
}

fn triple() -> impl Strategy<Value = (Subspace, Subspace, Subspace)> {
    (3usize..=6).prop_flat_map(|n| (subspace(n), subspace(n), subspace(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grassmann_formula((u, w, _) in triple()) {
        let sum = subspace_sum(&u, &w).unwrap();
        let meet = subspace_intersect(&u, &w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(sum.contains(&u) && sum.contains(&w));
        prop_assert!(u.contains(&meet) && w.contains(&meet));
    }

    #[test]
    fn canonical_form_is_stable((u, _, _) in triple()) {
        prop_assert_eq!(canonicalize(u.basis()), u.clone());
        let text = serde_json::to_string(&u).unwrap();
        let back: Subspace = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn submodularity_holds((a, b, c) in triple()) {
        prop_assert!(submodularity_check(&a, &b, &c).unwrap());
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rat(&format_rat(&x)).unwrap(), x);
    }

    #[test]
    fn seeds_are_stable(m in any::<u64>(), i in any::<u64>()) {
        prop_assert_eq!(derive_seed(m, "a", "b", i), derive_seed(m, "a", "b", i));
        prop_assert_ne!(derive_seed(m, "a", "b", i), derive_seed(m, "a", "c", i));
    }

    /// Rescaling the target of each map by `c_j` multiplies the Gaussian
    /// ratio by `prod |c_j|^{-n_j p_j}` once the inputs are rescaled to match.
    #[test]
    fn gaussian_ratio_scaling(c1 in 0.3f64..3.0, c2 in 0.3f64..3.0, a in 0.5f64..2.0, b in 0.5f64..2.0) {
        let d = BLDatum::holder(2, vec![rat(1, 2), rat(1, 2)]).unwrap();
        let id = DMatrix::<f64>::identity(2, 2);
        let scaled = BLDatum::new(
            2,
            vec![BLMap::from_float(&id * c1), BLMap::from_float(&id * c2)],
            vec![rat(1, 2), rat(1, 2)],
        )
        .unwrap();
        let m = [&id * a, &id * b];
        // f_j(c y) with input M_j / c^2 reproduces f_j(y) with M_j.
        let m_scaled = [&m[0] / (c1 * c1), &m[1] / (c2 * c2)];
        let r = gaussian_ratio(&d, &m).unwrap();
        let rs = gaussian_ratio(&scaled, &m_scaled).unwrap();
        let factor = (c1 * c2).powf(-1.0);
        prop_assert!((rs - r * factor).abs() < 1e-9 * r.max(1.0), "{} vs {}", rs, r * factor);
        prop_assert!(r <= 1.0 + 1e-12);
    }

    #[test]
    fn covering_is_monotone(points in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..200)) {
        let pts: Vec<Vec<f64>> = points.into_iter().map(|(x, y)| vec![x, y]).collect();
        let set = PointSet::new(2, pts, "proptest").unwrap();
        let mut prev = 0;
        for s in 1..8 {
            let c = covering_number(&set, s).unwrap();
            prop_assert!(c >= prev && c <= set.len());
            prev = c;
        }
    }

    #[test]
    fn search_value_is_attained(a in 1i64..5, b in 1i64..5, c in 1i64..5, t in 1i64..6) {
        let text = format!("{a}*x1^2+{b}*x2^2-{c}*sqrt2*x3^2");
        let q: QuadraticForm = text.parse().unwrap();
        let r = search_min_value(&q, &int(0), t).unwrap();
        prop_assert!(r.best_v.iter().all(|x| x.abs() <= t) && r.best_v.iter().any(|&x| x != 0));
        let v: QuadRat = q.eval(&r.best_v);
        prop_assert_eq!((v.a.abs(), v.b.abs()), (r.value_exact.a.abs(), r.value_exact.b.abs()));
        // No vector in the box does better.
        for x in -t..=t {
            for y in -t..=t {
                for z in -t..=t {
                    if (x, y, z) != (0, 0, 0) {
                        prop_assert!(q.eval(&[x, y, z]).to_f64().abs() >= r.best_value - 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn reports_round_trip(verdicts in prop::collection::vec(0u8..3, 0..6), trials in 0usize..5) {
        let items: Vec<ReportItem> = verdicts
            .iter()
            .enumerate()
            .map(|(i, v)| ReportItem {
                module: "m".into(),
                op: "op".into(),
                label: format!("item {i}"),
                verdict: [Verdict::Pass, Verdict::Fail, Verdict::Error][*v as usize],
                detail: serde_json::json!({ "i": i }),
                trials: (0..trials)
                    .map(|t| TrialRecord { trial: t, seed: t as u64, value: 0.1 * t as f64, pass: t % 2 == 0 })
                    .collect(),
            })
            .collect();
        let summary = Summary::of(&items);
        prop_assert_eq!(summary.passed + summary.failed + summary.errors, summary.total);
        let r = ExperimentReport {
            suites: vec![],
            master_seed: 1,
            tool_version: "t".into(),
            config_hash: "h".into(),
            summary,
            items,
            wall_clock_ms: None,
        };
        let json = emit_report(&r, ReportFormat::Json).unwrap();
        let back: ExperimentReport = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &r);
        let csv = emit_report(&r, ReportFormat::Csv).unwrap();
        prop_assert_eq!(csv.lines().count(), 1 + verdicts.len() * trials);
        let md = emit_report(&r, ReportFormat::Markdown).unwrap();
        prop_assert_eq!(md.lines().filter(|l| l.starts_with("| m |")).count(), verdicts.len());
    }
}

#[test]
fn projector_scaling_leaves_kernel() {
    let m = Mat::from_ints(&[vec![1, 2, 0], vec![0, 1, 1]]);
    let k = equilab::linalg::kernel_basis(&m);
    assert_eq!(k.dim(), 1);
    assert!(m.mul_vec(&k.basis().column(0)).iter().all(|x| *x == int(0)));
}
