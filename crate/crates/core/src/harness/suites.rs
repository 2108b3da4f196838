use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{derive_seed, ReportItem, Suite, SuiteConfig, TrialRecord, Verdict};
use crate::bl::{
    build_datum_from_rep, check_feasibility, estimate_bl_constant, quadrature_ratio, BLDatum,
    BLMap, DatumMode, EstimateOptions, FeasibilityMode,
};
use crate::discretized::{
    frostman_energy_bound_check, generate_fractal, projection_experiment, remez_check, FractalDesc,
    Polynomial, ProjectionParams,
};
use crate::generic_dim::{
    find_spanning_q, intersection_report, projection_trial, sample_trials, submodularity_check,
    weight_flag_family, SubspaceSpec, TrialReport,
};
use crate::linalg::{int, parse_rat, rat, Mat, Rat, Subspace};
use crate::oppenheim::{decay_curve, search_min_value, QuadraticForm};
use crate::rep::{
    build_config, check_irreducible, check_proximal, flag_projector, weight_decompose,
    IrreducibleVerdict, RepConfig,
};
use crate::seed;

pub(super) fn run(suite: Suite, cfg: &SuiteConfig) -> Vec<ReportItem> {
    match suite {
        Suite::Hypotheses => hypotheses(cfg),
        Suite::GenericDim => generic_dim(cfg),
        Suite::Bl => bl(cfg),
        Suite::Discretized => discretized(cfg),
        Suite::Oppenheim => oppenheim(cfg),
        Suite::All => unreachable!("expanded before dispatch"),
    }
}

fn item(module: &str, op: &str, label: impl Into<String>) -> ReportItem {
    ReportItem {
        module: module.into(),
        op: op.into(),
        label: label.into(),
        verdict: Verdict::Pass,
        detail: Value::Null,
        trials: Vec::new(),
    }
}

/// Turns a computation into a report item; errors become `Verdict::Error`.
fn settle<E: std::fmt::Display>(
    mut base: ReportItem,
    body: impl FnOnce(&mut ReportItem) -> Result<bool, E>,
) -> ReportItem {
    match body(&mut base) {
        Ok(pass) => base.verdict = if pass { Verdict::Pass } else { Verdict::Fail },
        Err(e) => {
            base.verdict = Verdict::Error;
            base.detail = json!({ "error": e.to_string() });
        }
    }
    base
}

fn config(name: &str) -> Result<RepConfig, String> {
    let kind = name.parse().map_err(|e| format!("{e}"))?;
    build_config(kind).map_err(|e| e.to_string())
}

fn hypotheses(cfg: &SuiteConfig) -> Vec<ReportItem> {
    cfg.configs
        .par_iter()
        .map(|name| {
            settle(item("rep", "hypotheses", name.clone()), |it| {
                let c = config(name)?;
                let dec = weight_decompose(&c).map_err(|e| e.to_string())?;
                let irr = check_irreducible(&c);
                let proximal = check_proximal(&dec);
                it.detail = json!({
                    "n": c.n,
                    "irreducible": irr.label(),
                    "proximal": proximal,
                    "weights": dec.eigenvalues.iter().map(crate::linalg::format_rat).collect::<Vec<_>>(),
                    "multiplicities": dec.multiplicities,
                });
                Ok::<_, String>(irr == IrreducibleVerdict::AbsolutelyIrreducible)
            })
        })
        .collect()
}

fn trial_detail(r: &TrialReport) -> Value {
    json!({
        "trials": r.trials,
        "passes": r.passes,
        "histogram": r.dimension_histogram,
        "modal_dim": r.modal_dim,
        "stable": r.stable,
        "failures": r.witness_failures,
    })
}

fn trial_records(r: &TrialReport) -> Vec<TrialRecord> {
    r.rows
        .iter()
        .map(|row| TrialRecord {
            trial: row.trial,
            seed: row.seed,
            value: row.dim as f64,
            pass: row.pass,
        })
        .collect()
}

fn generic_dim(cfg: &SuiteConfig) -> Vec<ReportItem> {
    const MODULE: &str = "generic_dim";
    let ms = cfg.master_seed;
    let p = &cfg.generic;
    let mut items = Vec::new();

    for (ci, name) in cfg.configs.iter().enumerate() {
        let seed = derive_seed(ms, MODULE, "intersection", ci as u64);
        let setup = config(name).and_then(|c| {
            let dec = weight_decompose(&c).map_err(|e| e.to_string())?;
            let batch = sample_trials(&c, p.trials, seed).map_err(|e| e.to_string())?;
            Ok((weight_flag_family(&dec), batch))
        });
        let (family, batch) = match setup {
            Ok(x) => x,
            Err(e) => {
                items.push(settle(item(MODULE, "intersection", name.clone()), |_| {
                    Err::<bool, _>(e)
                }));
                continue;
            }
        };
        let pairs: Vec<_> = family
            .iter()
            .flat_map(|a| family.iter().map(move |b| (a, b)))
            .collect();
        items.par_extend(pairs.into_par_iter().map(|((sw, w), (swp, wp))| {
            settle(
                item(MODULE, "intersection", format!("{name} {sw} {swp}")),
                |it| {
                    let r = intersection_report(&batch, w, wp)?;
                    it.detail = trial_detail(&r);
                    it.trials = trial_records(&r);
                    Ok::<_, crate::generic_dim::GenericError>(r.all_pass())
                },
            )
        }));
    }

    for (i, pc) in p.plane_pairs.iter().enumerate() {
        let label = format!("{} {} {}", pc.config, pc.w, pc.w_prime);
        items.push(settle(item(MODULE, "plane-equality", label), |it| {
            let c = config(&pc.config)?;
            let dec = weight_decompose(&c).map_err(|e| e.to_string())?;
            let resolve = |s: &str| -> Result<Subspace, String> {
                let spec: SubspaceSpec = s.parse().map_err(|e| format!("{e}"))?;
                spec.resolve(&dec, 0).map_err(|e| e.to_string())
            };
            let (w, wp) = (resolve(&pc.w)?, resolve(&pc.w_prime)?);
            let batch = sample_trials(
                &c,
                p.trials,
                derive_seed(ms, MODULE, "plane-equality", i as u64),
            )
            .map_err(|e| e.to_string())?;
            let r = intersection_report(&batch, &w, &wp).map_err(|e| e.to_string())?;
            let equality = r.rows.iter().all(|row| row.dim * c.n == w.dim() * wp.dim());
            it.detail = trial_detail(&r);
            it.detail["equality_every_trial"] = json!(equality);
            it.trials = trial_records(&r);
            Ok::<_, String>(
                r.all_pass() && r.dimension_histogram.get(&pc.expected_dim) == Some(&r.trials),
            )
        }));
    }

    items.par_extend(
        p.spanning_configs
            .par_iter()
            .enumerate()
            .flat_map_iter(|(ci, name)| {
                let flags = config(name).and_then(|c| {
                    let dec = weight_decompose(&c).map_err(|e| e.to_string())?;
                    Ok((c, weight_flag_family(&dec)))
                });
                match flags {
                    Err(e) => vec![settle(item(MODULE, "spanning", name.clone()), |_| {
                        Err::<bool, _>(e)
                    })],
                    Ok((c, family)) => family
                        .iter()
                        .enumerate()
                        .filter(|(_, (_, w))| !w.is_full())
                        .map(|(fi, (spec, w))| {
                            settle(item(MODULE, "spanning", format!("{name} {spec}")), |it| {
                                let seed =
                                    derive_seed(ms, MODULE, "spanning", (ci * 1000 + fi) as u64);
                                let r = find_spanning_q(&c, w, p.spanning_trials, seed)?;
                                it.detail = serde_json::to_value(&r).expect("serializes");
                                Ok::<_, crate::generic_dim::GenericError>(r.stable)
                            })
                        })
                        .collect(),
                }
            }),
    );

    if p.submodularity > 0 {
        items.push(settle(
            item(MODULE, "submodularity", "random triples, n in 4..=6"),
            |it| {
                it.trials = (0..p.submodularity)
                    .into_par_iter()
                    .map(|t| {
                        let seed = derive_seed(ms, MODULE, "submodularity", t as u64);
                        let mut rng = seed::rng(seed);
                        let n = rng.gen_range(4..=6);
                        let mut sub = || small_subspace(&mut rng, n);
                        let (wp, w1, w2) = (sub(), sub(), sub());
                        let ok = submodularity_check(&wp, &w1, &w2)?;
                        Ok(TrialRecord {
                            trial: t,
                            seed,
                            value: n as f64,
                            pass: ok,
                        })
                    })
                    .collect::<Result<Vec<_>, crate::generic_dim::GenericError>>()?;
                let passes = it.trials.iter().filter(|t| t.pass).count();
                it.detail = json!({ "trials": p.submodularity, "passes": passes });
                Ok::<_, crate::generic_dim::GenericError>(passes == p.submodularity)
            },
        ));
    }

    if p.duality > 0 {
        items.push(settle(
            item(MODULE, "duality", "rank identity over built-in configs"),
            |it| {
                let configs: Vec<(RepConfig, Vec<Subspace>)> = cfg
                    .configs
                    .iter()
                    .map(|name| {
                        let c = config(name)?;
                        let dec = weight_decompose(&c).map_err(|e| e.to_string())?;
                        let flags = weight_flag_family(&dec)
                            .into_iter()
                            .map(|(_, w)| w)
                            .collect();
                        Ok((c, flags))
                    })
                    .collect::<Result<_, String>>()?;
                if configs.is_empty() {
                    return Err("no configurations".to_string());
                }
                it.trials = (0..p.duality)
                    .into_par_iter()
                    .map(|t| {
                        let seed = derive_seed(ms, MODULE, "duality", t as u64);
                        let mut rng = seed::rng(seed);
                        let (c, flags) = &configs[rng.gen_range(0..configs.len())];
                        let w = &flags[rng.gen_range(0..flags.len())];
                        let wp = &flags[rng.gen_range(0..flags.len())];
                        let h = sample_trials(c, 1, seed)
                            .map_err(|e| e.to_string())?
                            .remove(0);
                        let pt = projection_trial(&h.matrix, w, wp).map_err(|e| e.to_string())?;
                        Ok(TrialRecord {
                            trial: t,
                            seed,
                            value: pt.rank as f64,
                            pass: pt.duality.0 == pt.duality.1 && pt.pass,
                        })
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                let passes = it.trials.iter().filter(|t| t.pass).count();
                it.detail = json!({ "trials": p.duality, "passes": passes });
                Ok::<_, String>(passes == p.duality)
            },
        ));
    }
    items
}

/// Span of 1 to `n` vectors with entries in `{-1, 0, 1}`, so that triples
/// often share directions and the intersections are not all trivial.
fn small_subspace(rng: &mut impl Rng, n: usize) -> Subspace {
    let count = rng.gen_range(1..=n);
    let vectors: Vec<Vec<Rat>> = (0..count)
        .map(|_| (0..n).map(|_| int(rng.gen_range(-1..=1))).collect())
        .collect();
    Subspace::from_vectors(n, &vectors)
}

fn random_pd(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let b = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-0.5..=0.5));
    &b * b.transpose() + DMatrix::identity(n, n) * 0.5
}

/// Ten data built from representations, each feasible by construction, and
/// the same ten with a common vector added to every kernel, which makes the
/// line through it a violating subspace. Returns `(label, datum, feasible)`.
pub fn bl_agreement_corpus(seed: u64) -> Result<Vec<(String, BLDatum, bool)>, String> {
    // Only top lines and hyperplanes: the kernel lattice of generic
    // intermediate-dimensional kernels is infinite.
    let cases = [
        ("so_pq:2,1", 2),
        ("so_pq:2,1", -1),
        ("sl2_sym:4", 4),
        ("sl2_sym:4", -2),
        ("sp2n:2", 3),
        ("sp2n:2", -1),
        ("sl2_sym:2", 2),
        ("sl2_sym:2", 0),
        ("sl2_sym:3", 3),
        ("sl2_sym:3", -1),
    ];
    let mut out = Vec::new();
    for (i, (name, mu)) in cases.iter().enumerate() {
        let c = config(name)?;
        let dec = weight_decompose(&c).map_err(|e| e.to_string())?;
        let w = flag_projector(&dec, &int(*mu))
            .map_err(|e| e.to_string())?
            .flag;
        let elements = sample_trials(&c, c.n, seed::derive(seed, i as u64))
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|s| s.matrix)
            .collect();
        let d = build_datum_from_rep(&c, &DatumMode::Subspace { w, elements })
            .map_err(|e| e.to_string())?;
        let v: Vec<Rat> = (0..c.n)
            .map(|k| int(((k * 7 + i + 1) % 5) as i64 - 2))
            .collect();
        let stuffed = d.stuff_kernel(&v).map_err(|e| e.to_string())?;
        out.push((format!("{name} flag:{mu}"), d, true));
        out.push((format!("{name} flag:{mu} stuffed"), stuffed, false));
    }
    Ok(out)
}

fn bl(cfg: &SuiteConfig) -> Vec<ReportItem> {
    const MODULE: &str = "bl";
    let ms = cfg.master_seed;
    let p = &cfg.bl;
    let half = rat(1, 2);
    let known: Vec<(&str, Result<BLDatum, crate::bl::BLError>)> = vec![
        (
            "holder n=3",
            BLDatum::holder(3, vec![half.clone(), half.clone()]),
        ),
        ("loomis-whitney n=3", BLDatum::loomis_whitney(3)),
    ];
    let mut items = Vec::new();
    for (i, (label, datum)) in known.iter().enumerate() {
        items.push(settle(item(MODULE, "estimate", *label), |it| {
            let d = datum.clone()?;
            let e = estimate_bl_constant(
                &d,
                EstimateOptions::new(p.budget, derive_seed(ms, MODULE, "estimate", i as u64)),
            )?;
            it.detail = json!({
                "variational": e.lower_bound_variational,
                "gaussian": e.lower_bound_gaussian,
                "converged": e.converged,
                "bl_infinite": e.bl_infinite,
                "iterations": e.iterations,
            });
            Ok::<_, crate::bl::BLError>(
                e.lower_bound_variational >= 0.999 && e.lower_bound_gaussian >= 0.999,
            )
        }));
        items.push(settle(item(MODULE, "quadrature", *label), |it| {
            let d = datum.clone()?;
            let mut worst: f64 = 0.0;
            for t in 0..p.quadrature_inputs {
                let seed = derive_seed(ms, MODULE, "quadrature", (i * 1000 + t) as u64);
                let mut rng = seed::rng(seed);
                let m_list: Vec<DMatrix<f64>> =
                    d.maps.iter().map(|m| random_pd(&mut rng, m.nj)).collect();
                let ratio = quadrature_ratio(&d, &m_list, 6.0, p.quadrature_points)?;
                worst = worst.max(ratio);
                it.trials.push(TrialRecord {
                    trial: t,
                    seed,
                    value: ratio,
                    pass: ratio <= 1.0 + 1e-6,
                });
            }
            it.detail = json!({ "max_ratio": worst });
            Ok::<_, crate::bl::BLError>(it.trials.iter().all(|t| t.pass))
        }));
    }

    items.push(settle(
        item(MODULE, "violated", "single projection, p = 2, n = 2"),
        |it| {
            let pi = Mat::from_ints(&[vec![1, 0]]);
            let d = BLDatum::new(2, vec![BLMap::from_exact(pi)], vec![int(2)])?;
            let cert = check_feasibility(&d, FeasibilityMode::Lattice)?;
            let e = estimate_bl_constant(
                &d,
                EstimateOptions::new(p.budget, derive_seed(ms, MODULE, "violated", 0)),
            )?;
            it.detail =
                json!({ "certificate": cert, "bl_infinite": e.bl_infinite, "min_f": e.min_f });
            Ok::<_, crate::bl::BLError>(cert.witness().is_some() && e.bl_infinite)
        },
    ));

    if p.corpus {
        match bl_agreement_corpus(derive_seed(ms, MODULE, "corpus", 0)) {
            Err(e) => items.push(settle(item(MODULE, "agreement", "corpus"), |_| {
                Err::<bool, _>(e)
            })),
            Ok(corpus) => items.par_extend(corpus.into_par_iter().enumerate().map(
                |(i, (label, d, feasible))| {
                    settle(item(MODULE, "agreement", label), |it| {
                        let cert = check_feasibility(&d, FeasibilityMode::Lattice)?;
                        let seed = derive_seed(ms, MODULE, "agreement", i as u64);
                        let e = estimate_bl_constant(&d, EstimateOptions::new(p.budget, seed))?;
                        it.detail = json!({
                            "constructed_feasible": feasible,
                            "lattice_feasible": cert.is_feasible(),
                            "lattice_size": cert.lattice_size,
                            "witness": cert.witness(),
                            "bl_infinite": e.bl_infinite,
                            "min_f": e.min_f,
                        });
                        Ok::<_, crate::bl::BLError>(
                            cert.is_feasible() == feasible && e.bl_infinite != feasible,
                        )
                    })
                },
            )),
        }
    }
    items
}

fn frostman_desc(i: usize) -> String {
    let round = i / 4;
    match i % 4 {
        0 => format!(
            "random:5:2:{}",
            ["0.2", "0.25", "0.3", "0.35", "0.4"][round % 5]
        ),
        1 => format!("cantor:3:0,2:{}:2", 3 + round % 3),
        2 => format!("random:3:3:{}", ["0.3", "0.5", "0.7"][round % 3]),
        _ => format!("cantor:4:0,1,3:2:{}", 2 + round % 2),
    }
}

fn discretized(cfg: &SuiteConfig) -> Vec<ReportItem> {
    const MODULE: &str = "discretized";
    let ms = cfg.master_seed;
    let p = &cfg.discretized;
    let mut items: Vec<ReportItem> = (0..p.frostman_sets)
        .into_par_iter()
        .map(|i| {
            let desc = frostman_desc(i);
            settle(item(MODULE, "frostman-energy", desc.clone()), |it| {
                let seed = derive_seed(ms, MODULE, "frostman-energy", i as u64);
                let f = generate_fractal(&desc.parse::<FractalDesc>()?, seed)?;
                for (t, &(alpha, beta)) in p.frostman_exponents.iter().enumerate() {
                    let ok = frostman_energy_bound_check(&f, p.frostman_s, alpha, beta)?;
                    it.trials.push(TrialRecord {
                        trial: t,
                        seed,
                        value: alpha,
                        pass: ok,
                    });
                }
                it.detail = json!({ "points": f.len(), "exponents": p.frostman_exponents });
                Ok::<_, crate::discretized::DiscretizedError>(it.trials.iter().all(|t| t.pass))
            })
        })
        .collect();

    let pp = &p.projection;
    let run_projection = |op: &str, fractal: &str, s: u32, it: &mut ReportItem| {
        let c = config(&pp.config)?;
        let desc: FractalDesc = fractal.parse().map_err(|e| format!("{e}"))?;
        let f =
            generate_fractal(&desc, derive_seed(ms, MODULE, op, 0)).map_err(|e| e.to_string())?;
        let params = ProjectionParams {
            mu: parse_rat(&pp.mu).map_err(|e| e.to_string())?,
            s,
            epsilon: pp.epsilon,
            m_exponent: pp.m_exponent,
            num_u: pp.num_u,
            seed: derive_seed(ms, MODULE, op, 1),
            mode: pp.mode,
        };
        let r = projection_experiment(&c, &f, &params).map_err(|e| e.to_string())?;
        it.trials = r
            .per_u
            .iter()
            .map(|u| TrialRecord {
                trial: u.index,
                seed: params.seed,
                value: u.covering as f64,
                pass: !u.exceptional,
            })
            .collect();
        let mut detail = serde_json::to_value(&r).expect("serializes");
        detail.as_object_mut().expect("object").remove("per_u");
        it.detail = detail;
        Ok::<_, String>(r)
    };
    items.push(settle(
        item(
            MODULE,
            "projection",
            format!("{} {}", pp.config, pp.fractal),
        ),
        |it| run_projection("projection", &pp.fractal, pp.s, it).map(|r| r.passes),
    ));
    items.push(settle(
        item(
            MODULE,
            "projection-control",
            format!("{} {}", pp.config, pp.control_fractal),
        ),
        |it| {
            run_projection("projection-control", &pp.control_fractal, pp.control_s, it)
                .map(|r| r.exceptional_count == 0)
        },
    ));

    if p.remez_polys > 0 {
        items.push(settle(
            item(MODULE, "remez", "random polynomials, d <= 2, deg <= 4"),
            |it| {
                it.trials = (0..p.remez_polys)
                    .into_par_iter()
                    .map(|t| {
                        let seed = derive_seed(ms, MODULE, "remez", t as u64);
                        let vars = 1 + t % 2;
                        let degree = 1 + (t / 2 % 4) as u32;
                        let poly = Polynomial::random(vars, degree, seed);
                        let bounds = vec![(-1.0, 1.0); vars];
                        let r =
                            remez_check(&poly, &bounds, p.remez_eps, p.remez_samples, seed, None)?;
                        Ok(TrialRecord {
                            trial: t,
                            seed,
                            value: r.empirical_measure / r.bound,
                            pass: r.ok,
                        })
                    })
                    .collect::<Result<Vec<_>, crate::discretized::DiscretizedError>>()?;
                let passes = it.trials.iter().filter(|t| t.pass).count();
                it.detail = json!({ "polynomials": p.remez_polys, "passes": passes });
                Ok::<_, crate::discretized::DiscretizedError>(passes == p.remez_polys)
            },
        ));
    }
    items
}

fn oppenheim(cfg: &SuiteConfig) -> Vec<ReportItem> {
    const MODULE: &str = "oppenheim";
    let p = &cfg.oppenheim;
    let mut items = Vec::new();
    items.push(settle(item(MODULE, "decay", p.form.clone()), |it| {
        let q: QuadraticForm = p.form.parse()?;
        let s =
            parse_rat(&p.s).map_err(|e| crate::oppenheim::OppenheimError::Parse(e.to_string()))?;
        let curve = decay_curve(&q, &s, &p.t_list)?;
        let positive = curve.rows.iter().all(|r| !r.is_exact_hit());
        let monotone = curve
            .rows
            .windows(2)
            .all(|w| w[1].best_value <= w[0].best_value);
        let last = curve.rows.last().map_or(f64::INFINITY, |r| r.best_value);
        it.trials = curve
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| TrialRecord {
                trial: i,
                seed: 0,
                value: r.best_value,
                pass: !r.is_exact_hit(),
            })
            .collect();
        it.detail = json!({
            "curve": curve,
            "strictly_positive": positive,
            "non_increasing": monotone,
            "threshold": p.threshold,
        });
        Ok::<_, crate::oppenheim::OppenheimError>(positive && monotone && last <= p.threshold)
    }));
    items.push(settle(
        item(MODULE, "control", p.control_form.clone()),
        |it| {
            let q: QuadraticForm = p.control_form.parse()?;
            let r = search_min_value(&q, &Rat::from_integer(0.into()), p.control_t)?;
            let hit = r.is_exact_hit();
            it.detail = serde_json::to_value(&r).expect("serializes");
            Ok::<_, crate::oppenheim::OppenheimError>(hit)
        },
    ));
    items
}
