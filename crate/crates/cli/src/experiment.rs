//! Random-system sweeps, K-fold cross-validation and the set-function report.

use crate::config::{ExperimentConfig, Observation};
use greedy_sensors::data::{
    gen_latent, gen_random_system, kfold, load_snapshots, pod_truncate, NormalStream, PodOptions,
    SnapshotData,
};
use greedy_sensors::submod::{
    check_monotone, check_monotone_sizes, check_submodular, nemhauser_bound, ObjectiveKind,
    CHECK_TOLERANCE,
};
use greedy_sensors::{
    build_measurement, counterexample_matrix, counterexample_report, estimate_columns, fisher_info,
    nemhauser_check, reconstruction_error, select, CandidateMatrixF64, Error, Method,
    SelectOptions, SelectionResultF64, SetObjective,
};
use nalgebra::DMatrix;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt::Write as _;

/// One `(method, p, trial)` outcome. For cross-validation `trial` is the fold.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub method: Method,
    pub p: usize,
    pub trial: usize,
    pub indices: Vec<usize>,
    pub det_index: f64,
    pub trace_inv_index: f64,
    pub min_eig_index: f64,
    pub recon_error: f64,
    pub wall_time_s: f64,
}

/// Seed for trial (or fold) `trial`, independent of scheduling order.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng.next_u64()
}

/// Indices of the sensor set and the three information indices; a singular
/// set reports an infinite trace and NaN is never produced.
fn indices_of(cand: &CandidateMatrixF64, idx: &[usize]) -> Result<(f64, f64, f64), Error> {
    let f = fisher_info(&build_measurement(cand, idx)?)?;
    let tr = match f.trace_inv_index() {
        Ok(v) => v,
        Err(Error::SingularInformation) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok((f.det_index(), tr, f.min_eig_index()?))
}

fn estimate_error(
    cand: &CandidateMatrixF64,
    idx: &[usize],
    y: &DMatrix<f64>,
    z_true: &DMatrix<f64>,
) -> Result<f64, Error> {
    let s = build_measurement(cand, idx)?;
    match estimate_columns(&s, y) {
        Ok(z) => reconstruction_error(z_true, &z),
        Err(Error::SingularInformation) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn run_selector(
    cand: &CandidateMatrixF64,
    method: Method,
    p: usize,
    seed: u64,
) -> Result<SelectionResultF64, Error> {
    select(
        cand,
        method,
        p,
        SelectOptions {
            seed,
            ..SelectOptions::default()
        },
    )
}

fn sort_records(records: &mut [ExperimentRecord], methods: &[Method]) {
    let rank = |m: Method| methods.iter().position(|&x| x == m).unwrap_or(usize::MAX);
    records.sort_by_key(|r| (rank(r.method), r.p, r.trial));
}

/// Every greedy is run once to `p_max`; smaller budgets are its prefixes
/// and their time is the cumulative selection time up to that step.
fn one_trial(cfg: &ExperimentConfig, trial: usize) -> Result<Vec<ExperimentRecord>, Error> {
    let ts = trial_seed(cfg.seed, trial);
    let u = gen_random_system::<f64>(cfg.n, cfg.r, ts);
    let z = gen_latent::<f64>(cfg.r, 1, ts);
    let noise: DMatrix<f64> = NormalStream::new(ts, 2).matrix(cfg.n, 1);
    let mut out = Vec::new();
    for &method in &cfg.methods {
        let sel = run_selector(&u, method, cfg.p_max, ts)?;
        for p in cfg.p_min..=cfg.p_max {
            let idx = &sel.indices[..p];
            let (det, tr, lmin) = indices_of(&u, idx)?;
            let c = u.matrix().select_rows(idx);
            let y = &c * &z + noise.select_rows(idx) * cfg.sigma;
            out.push(ExperimentRecord {
                method,
                p,
                trial,
                indices: idx.to_vec(),
                det_index: det,
                trace_inv_index: tr,
                min_eig_index: lmin,
                recon_error: estimate_error(&u, idx, &y, &z)?,
                wall_time_s: sel.step_wall_time[p - 1],
            });
        }
    }
    Ok(out)
}

/// Random Gaussian systems, one per trial, swept over `p_min..=p_max`.
/// Trials run in parallel; records come back sorted by `(method, p, trial)`.
pub fn run_random(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, Error> {
    let per_trial: Vec<Vec<ExperimentRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| one_trial(cfg, t))
        .collect::<Result<_, _>>()?;
    let mut records: Vec<ExperimentRecord> = per_trial.into_iter().flatten().collect();
    sort_records(&mut records, &cfg.methods);
    Ok(records)
}

/// K-fold cross-validation over the snapshot file named in the config.
pub fn run_cv(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, Error> {
    let path = cfg
        .data_path
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("cv needs a data path".into()))?;
    let data = load_snapshots::<f64>(path, cfg.format)?;
    run_cv_on(cfg, &data)
}

/// K-fold cross-validation: POD on the training columns, sensors chosen on
/// the training modes, latent amplitudes of the test columns estimated from
/// the sensor readings. Indices in the records are grid locations.
pub fn run_cv_on(
    cfg: &ExperimentConfig,
    data: &SnapshotData<f64>,
) -> Result<Vec<ExperimentRecord>, Error> {
    let plan = kfold(data.m(), cfg.k)?;
    let locations = data.valid_locations();
    let x_all = data.masked_matrix();
    let per_fold: Vec<Vec<ExperimentRecord>> = (0..plan.k())
        .into_par_iter()
        .map(|fold| -> Result<Vec<ExperimentRecord>, Error> {
            let train = plan.train(fold);
            let test: Vec<usize> = if cfg.test_on_train {
                train.clone()
            } else {
                plan.test(fold).collect()
            };
            let pod = pod_truncate(
                &data.select_columns(&train),
                cfg.r,
                PodOptions {
                    subtract_mean: cfg.subtract_mean,
                },
            )?;
            let cand = pod.candidates(&locations)?;
            let x_test = x_all.select_columns(&test);
            let z_true = pod.project(&x_test);
            let centred = pod.centre(&x_test);
            let fs = trial_seed(cfg.seed, fold);
            let noise: DMatrix<f64> = NormalStream::new(fs, 2).matrix(cand.n(), test.len());
            let mut out = Vec::new();
            for &method in &cfg.methods {
                let sel = run_selector(&cand, method, cfg.p_max, fs)?;
                for p in cfg.p_min..=cfg.p_max {
                    let idx = &sel.indices[..p];
                    let locs: Vec<usize> = idx.iter().map(|&j| locations[j]).collect();
                    let clean = match cfg.observation {
                        Observation::Raw => centred.select_rows(&locs),
                        Observation::Reduced => cand.matrix().select_rows(idx) * &z_true,
                    };
                    let y = clean + noise.select_rows(idx) * cfg.sigma;
                    let (det, tr, lmin) = indices_of(&cand, idx)?;
                    out.push(ExperimentRecord {
                        method,
                        p,
                        trial: fold,
                        indices: locs,
                        det_index: det,
                        trace_inv_index: tr,
                        min_eig_index: lmin,
                        recon_error: estimate_error(&cand, idx, &y, &z_true)?,
                        wall_time_s: sel.step_wall_time[p - 1],
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    let mut records: Vec<ExperimentRecord> = per_fold.into_iter().flatten().collect();
    sort_records(&mut records, &cfg.methods);
    Ok(records)
}

pub const METRICS: [&str; 5] = [
    "det_index",
    "trace_inv_index",
    "min_eig_index",
    "recon_error",
    "wall_time_s",
];

fn metric(r: &ExperimentRecord, name: &str) -> f64 {
    match name {
        "det_index" => r.det_index,
        "trace_inv_index" => r.trace_inv_index,
        "min_eig_index" => r.min_eig_index,
        "recon_error" => r.recon_error,
        "wall_time_s" => r.wall_time_s,
        _ => unreachable!("unknown metric {name}"),
    }
}

/// Long-format summary row: `metric` is `<name>_mean` or `<name>_dg_normalized`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub p: usize,
    pub metric: String,
    pub value: f64,
}

/// Per-(method, p) means over trials, and those means divided by DG's mean
/// at the same `p` when DG is among the methods.
pub fn summarize(records: &[ExperimentRecord], methods: &[Method]) -> Vec<SummaryRow> {
    let mut ps: Vec<usize> = records.iter().map(|r| r.p).collect();
    ps.sort_unstable();
    ps.dedup();
    let mean = |m: Method, p: usize, name: &str| {
        let vals: Vec<f64> = records
            .iter()
            .filter(|r| r.method == m && r.p == p)
            .map(|r| metric(r, name))
            .collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    };
    let mut rows = Vec::new();
    for &m in methods {
        for &p in &ps {
            for name in METRICS {
                let v = mean(m, p, name);
                rows.push(SummaryRow {
                    method: m,
                    p,
                    metric: format!("{name}_mean"),
                    value: v,
                });
                if methods.contains(&Method::Dg) {
                    rows.push(SummaryRow {
                        method: m,
                        p,
                        metric: format!("{name}_dg_normalized"),
                        value: if m == Method::Dg { 1.0 } else { v / mean(Method::Dg, p, name) },
                    });
                }
            }
        }
    }
    rows
}

/// Looks up one summary value.
pub fn summary_value(rows: &[SummaryRow], method: Method, p: usize, metric: &str) -> Option<f64> {
    rows.iter()
        .find(|r| r.method == method && r.p == p && r.metric == metric)
        .map(|r| r.value)
}

/// Outcome of the set-function report.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodSummary {
    pub text: String,
    pub witnesses_csv: String,
    pub nemhauser_csv: String,
    pub counterexample_both: bool,
    pub e_raw_neither: bool,
    pub a_eps_submodular_violations: usize,
    pub a_eps_monotone_violations: usize,
    pub worst_nemhauser_ratio: f64,
}

fn eps_for(cfg: &ExperimentConfig, cand: &CandidateMatrixF64) -> f64 {
    cfg.epsilon
        .unwrap_or_else(|| greedy_sensors::submod::default_epsilon(cand))
}

/// The counterexample, exhaustive checks on the embedded matrix and on 20
/// random 7×3 matrices, and the greedy-bound comparison on 50 small instances.
pub fn run_submod_report(cfg: &ExperimentConfig) -> Result<SubmodSummary, Error> {
    let mut text = String::new();
    let mut witnesses = String::from("instance,objective,kind,S,T,i,lhs,rhs\n");
    let ce = counterexample_report::<f64>()?;
    text.push_str("# counterexample (E objective)\n");
    text.push_str(&ce.to_text());

    let mut instances: Vec<(String, CandidateMatrixF64)> =
        vec![("embedded".to_string(), counterexample_matrix::<f64>())];
    for i in 0..20 {
        let seed = trial_seed(cfg.seed, i);
        instances.push((format!("gauss7x3_{i}"), gen_random_system::<f64>(7, 3, seed)));
    }

    let mut sub_viol = 0;
    let mut mono_viol = 0;
    let mut e_raw_neither = false;
    text.push_str("# exhaustive checks, |T| <= 5\n");
    for (name, cand) in &instances {
        let eps = eps_for(cfg, cand);
        let a = SetObjective::new(ObjectiveKind::AEps, cand, eps)?;
        let sub = check_submodular(&a, 5, CHECK_TOLERANCE)?;
        let mono = check_monotone(&a, 5, CHECK_TOLERANCE)?;
        sub_viol += sub.violations_submodular.len();
        mono_viol += mono.violations_monotone.len();
        let _ = write!(text, "{}", sub.to_text(&format!("{name} A_EPS(eps={eps:e}) diminishing returns")));
        let _ = write!(text, "{}", mono.to_text(&format!("{name} A_EPS(eps={eps:e}) monotone")));
        push_witnesses(&mut witnesses, name, "A_EPS", &sub.to_csv());
        push_witnesses(&mut witnesses, name, "A_EPS", &mono.to_csv());
        if name == "embedded" {
            let e = SetObjective::new(ObjectiveKind::ERaw, cand, 0.0)?;
            let rep = check_submodular(&e, 5, CHECK_TOLERANCE)?;
            e_raw_neither = !rep.is_submodular() && !rep.is_supermodular();
            let _ = write!(text, "{}", rep.to_text("embedded E_RAW diminishing returns"));
            let _ = writeln!(
                text,
                "embedded E_RAW neither submodular nor supermodular: {e_raw_neither}"
            );
            push_witnesses(&mut witnesses, name, "E_RAW", &rep.to_csv());
            let tail = check_monotone_sizes(&e, cand.r() + 1, cand.n(), CHECK_TOLERANCE)?;
            let _ = write!(text, "{}", tail.to_text("embedded E_RAW monotone past r"));
            let m = SetObjective::new(ObjectiveKind::ModularNorm, cand, 0.0)?;
            let _ = write!(
                text,
                "{}",
                check_submodular(&m, 5, CHECK_TOLERANCE)?.to_text("embedded MODULAR_NORM")
            );
        }
    }

    text.push_str("# greedy bound\n");
    let mut nem = String::from("instance,n,p,epsilon,greedy_value,opt_value,ratio,bound,holds\n");
    let mut worst = f64::INFINITY;
    for (i, (n, p)) in nemhauser_instances().into_iter().enumerate() {
        let cand = gen_random_system::<f64>(n, 3, trial_seed(cfg.seed ^ 0x9e37_79b9, i));
        let eps = cfg.epsilon.unwrap_or(1e-3);
        let rec = nemhauser_check(&cand, p, eps)?;
        worst = worst.min(rec.ratio);
        let _ = writeln!(
            nem,
            "{i},{n},{p},{eps:e},{:e},{:e},{:e},{:e},{}",
            rec.greedy_value,
            rec.opt_value,
            rec.ratio,
            nemhauser_bound(),
            rec.holds
        );
    }
    let _ = writeln!(
        text,
        "worst greedy/optimum ratio over 50 instances: {worst:.6} (bound {:.6})",
        nemhauser_bound()
    );
    Ok(SubmodSummary {
        text,
        witnesses_csv: witnesses,
        nemhauser_csv: nem,
        counterexample_both: ce.first_holds && ce.second_holds,
        e_raw_neither,
        a_eps_submodular_violations: sub_viol,
        a_eps_monotone_violations: mono_viol,
        worst_nemhauser_ratio: worst,
    })
}

/// `(n, p)` for the 50 greedy-bound instances: n in 10..=14, p in 2..=4.
pub fn nemhauser_instances() -> Vec<(usize, usize)> {
    (0..50).map(|i| (10 + i % 5, 2 + i % 3)).collect()
}

fn push_witnesses(out: &mut String, instance: &str, objective: &str, csv: &str) {
    for line in csv.lines().skip(1) {
        let _ = writeln!(out, "{instance},{objective},{line}");
    }
}
