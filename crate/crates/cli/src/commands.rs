//! The six subcommands: skeleton, simulate, controlled, sweep-eps, verify,
//! cost.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use tns_core::io::{
    write_atomic, write_energy_csv, write_event_csv, write_event_jsonl, write_sfld,
};
use tns_core::noise::{
    running_cost, sample_controlled_prm, sample_prm, Control, MarkSpace, PoissonSample,
};
use tns_core::seed::{derive_seed, rng_from_seed, streams};
use tns_core::solver::{solve_controlled, solve_sde, solve_skeleton, Trajectory};
use tns_core::spectral::{
    leray_project, nonlinear_term, FieldSampler, SobolevOrder, SpectralField,
};
use tns_core::verify as vf;

use crate::config::{Problem, RunConfig};
use crate::error::{CliError, CliResult};
use crate::fmt::format_sig;
use crate::manifest::write_manifest;

fn require_control<'a>(problem: &'a Problem, what: &str) -> CliResult<&'a Control> {
    problem.control.as_ref().ok_or_else(|| {
        CliError::Validation(format!("{what} requires a control block in the config"))
    })
}

fn require_eps(problem: &Problem, what: &str) -> CliResult<f64> {
    problem
        .eps
        .ok_or_else(|| CliError::Validation(format!("{what} requires solver.eps in the config")))
}

fn replica_count(config: &RunConfig) -> CliResult<usize> {
    let replicas = config.experiment.as_ref().map_or(1, |e| e.replicas);
    if replicas == 0 {
        return Err(CliError::Validation(
            "experiment.replicas must be at least 1".into(),
        ));
    }
    Ok(replicas)
}

// ---- skeleton -------------------------------------------------------------

pub fn cmd_skeleton(config: &RunConfig, base_dir: &Path, out_dir: &Path) -> CliResult<()> {
    let problem = config.build(base_dir)?;
    let control = require_control(&problem, "skeleton")?;
    let traj = solve_skeleton(
        &problem.u0,
        control,
        &problem.sigma,
        &problem.marks,
        &problem.solver,
    )?;

    let mut outputs = vec!["energy.csv".to_string(), "events.jsonl".to_string()];
    write_energy_csv(&out_dir.join("energy.csv"), &traj.energy)?;
    write_event_jsonl(&out_dir.join("events.jsonl"), &traj.events)?;
    for (i, (t, snap)) in traj.times.iter().zip(traj.snapshots.iter()).enumerate() {
        let name = format!("state_{i:06}.sfld");
        write_sfld(&out_dir.join(&name), snap, "u", *t)?;
        outputs.push(name);
    }
    write_manifest(
        out_dir,
        "skeleton",
        config,
        vec![],
        problem.control_bytes.as_deref(),
        outputs,
    )?;
    println!(
        "skeleton: {} snapshots, final ||u||_H1^2 = {}",
        traj.times.len(),
        format_sig(traj.final_field.h1_norm_sq(), 12)
    );
    Ok(())
}

// ---- ensembles ------------------------------------------------------------

#[derive(Serialize)]
struct StatSummary {
    mean: f64,
    min: f64,
    max: f64,
    p10: f64,
    p50: f64,
    p90: f64,
}

fn summarize(values: &[f64]) -> StatSummary {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
    StatSummary {
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        min: sorted[0],
        max: *sorted.last().unwrap(),
        p10: q(0.1),
        p50: q(0.5),
        p90: q(0.9),
    }
}

#[derive(Serialize)]
struct EnsembleSummary {
    replicas: usize,
    seeds: Vec<u64>,
    sup_h1_sq: StatSummary,
    jump_count: StatSummary,
    final_h1_sq: StatSummary,
}

struct ReplicaOutcome {
    sup_h1_sq: f64,
    jump_count: usize,
    final_h1_sq: f64,
}

fn run_replica(
    problem: &Problem,
    control: Option<&Control>,
    eps: f64,
    seed: u64,
    dir: &Path,
) -> CliResult<ReplicaOutcome> {
    let traj: Trajectory;
    let sample: PoissonSample;
    match control {
        None => {
            sample = sample_prm(1.0 / eps, &problem.marks, problem.solver.t_end, seed)?;
            traj = solve_sde(
                &problem.u0,
                eps,
                &problem.sigma,
                &problem.marks,
                &problem.solver,
                seed,
            )?;
        }
        Some(phi) => {
            sample = sample_controlled_prm(phi, eps, &problem.marks, seed)?;
            traj = solve_controlled(
                &problem.u0,
                eps,
                phi,
                &problem.sigma,
                &problem.marks,
                &problem.solver,
                seed,
            )?;
        }
    }
    write_energy_csv(&dir.join("energy.csv"), &traj.energy)?;
    write_event_jsonl(&dir.join("events.jsonl"), &traj.events)?;
    write_event_csv(&dir.join("events.csv"), &sample)?;
    write_sfld(
        &dir.join("final.sfld"),
        &traj.final_field,
        "u",
        problem.solver.t_end,
    )?;
    Ok(ReplicaOutcome {
        sup_h1_sq: traj.sup_h1_sq(),
        jump_count: traj.jump_count(),
        final_h1_sq: traj.final_field.h1_norm_sq(),
    })
}

fn run_ensemble(
    config: &RunConfig,
    base_dir: &Path,
    out_dir: &Path,
    command: &str,
    with_control: bool,
) -> CliResult<()> {
    let problem = config.build(base_dir)?;
    let eps = require_eps(&problem, command)?;
    let control = if with_control {
        Some(require_control(&problem, command)?)
    } else {
        None
    };
    let replicas = replica_count(config)?;
    let seeds: Vec<u64> = (0..replicas)
        .map(|i| derive_seed(config.seed, streams::EVENTS, i as u64))
        .collect();

    let outcomes: Vec<ReplicaOutcome> = (0..replicas)
        .into_par_iter()
        .map(|i| {
            let dir = out_dir.join(format!("replica_{i:03}"));
            run_replica(&problem, control, eps, seeds[i], &dir)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let summary = EnsembleSummary {
        replicas,
        seeds: seeds.clone(),
        sup_h1_sq: summarize(&outcomes.iter().map(|o| o.sup_h1_sq).collect::<Vec<_>>()),
        jump_count: summarize(
            &outcomes
                .iter()
                .map(|o| o.jump_count as f64)
                .collect::<Vec<_>>(),
        ),
        final_h1_sq: summarize(&outcomes.iter().map(|o| o.final_h1_sq).collect::<Vec<_>>()),
    };
    let mut bytes = serde_json::to_vec_pretty(&summary).expect("summary serializes");
    bytes.push(b'\n');
    write_atomic(&out_dir.join("summary.json"), &bytes)?;

    let mut outputs = vec!["summary.json".to_string()];
    for i in 0..replicas {
        for f in ["energy.csv", "events.jsonl", "events.csv", "final.sfld"] {
            outputs.push(format!("replica_{i:03}/{f}"));
        }
    }
    write_manifest(
        out_dir,
        command,
        config,
        seeds,
        problem.control_bytes.as_deref(),
        outputs,
    )?;
    println!(
        "{command}: {replicas} replicas, mean sup ||u||_H1^2 = {}, mean jumps = {}",
        format_sig(summary.sup_h1_sq.mean, 6),
        format_sig(summary.jump_count.mean, 6)
    );
    Ok(())
}

pub fn cmd_simulate(config: &RunConfig, base_dir: &Path, out_dir: &Path) -> CliResult<()> {
    run_ensemble(config, base_dir, out_dir, "simulate", false)
}

pub fn cmd_controlled(config: &RunConfig, base_dir: &Path, out_dir: &Path) -> CliResult<()> {
    run_ensemble(config, base_dir, out_dir, "controlled", true)
}

// ---- sweep-eps ------------------------------------------------------------

pub fn cmd_sweep_eps(config: &RunConfig, base_dir: &Path, out_dir: &Path) -> CliResult<()> {
    let problem = config.build(base_dir)?;
    let control = require_control(&problem, "sweep-eps")?;
    let experiment = config
        .experiment
        .as_ref()
        .ok_or_else(|| CliError::Validation("sweep-eps requires an experiment block".into()))?;
    if experiment.eps_ladder.is_empty() {
        return Err(CliError::Validation(
            "sweep-eps requires experiment.eps_ladder".into(),
        ));
    }
    let replicas = replica_count(config)?;
    let report = vf::eps_sweep(
        &problem.u0,
        control,
        &problem.sigma,
        &problem.marks,
        &problem.solver,
        &experiment.eps_ladder,
        replicas,
        config.seed,
    )?;

    let mut bytes = serde_json::to_vec_pretty(&report).expect("report serializes");
    bytes.push(b'\n');
    write_atomic(&out_dir.join("sweep_report.json"), &bytes)?;
    let mut csv = String::from("eps,mean_sup_h1_sq_diff,std_error\n");
    for i in 0..report.ladder.len() {
        csv.push_str(&format!(
            "{},{},{}\n",
            report.ladder[i], report.errors[i], report.std_errors[i]
        ));
    }
    write_atomic(&out_dir.join("sweep_report.csv"), csv.as_bytes())?;
    write_manifest(
        out_dir,
        "sweep-eps",
        config,
        vec![],
        problem.control_bytes.as_deref(),
        vec!["sweep_report.json".into(), "sweep_report.csv".into()],
    )?;

    for i in 0..report.ladder.len() {
        println!(
            "eps = {:>6}: mean sup ||u_eps - u_g||_H1^2 = {} (se {})",
            report.ladder[i],
            format_sig(report.errors[i], 6),
            format_sig(report.std_errors[i], 3)
        );
    }
    if !report.passed {
        return Err(CliError::Verification(
            "small-noise discrepancy did not decrease strictly down the ladder".into(),
        ));
    }
    println!("sweep-eps: PASS (strictly decreasing)");
    Ok(())
}

// ---- verify ----------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "kebab-case")]
pub enum Suite {
    Operators,
    Taming,
    Estimates,
    Isometry,
    Thinning,
    Cost,
    Stability,
    Refinement,
    All,
}

struct CheckOutcome {
    name: String,
    passed: bool,
    detail: String,
    report_json: Option<serde_json::Value>,
}

fn outcome<T: Serialize>(name: &str, passed: bool, detail: String, report: &T) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
        report_json: serde_json::to_value(report).ok(),
    }
}

/// Trial counts, scaled by `--trials` when given (interpreted as the
/// operator-trial budget; the statistical suites scale proportionally).
struct Budget {
    operator_trials: usize,
    estimate_samples: usize,
    mc_replicas: usize,
}

impl Budget {
    fn new(trials: Option<usize>) -> Self {
        let t = trials.unwrap_or(1000).max(1);
        Budget {
            operator_trials: t,
            estimate_samples: (t / 2).max(10),
            mc_replicas: (t * 10).max(100),
        }
    }
}

fn operator_checks(problem: &Problem, budget: &Budget, seed: u64) -> Vec<CheckOutcome> {
    let sampler = FieldSampler::new(problem.grid.clone(), 2.0, (0.3, 2.5));
    let mut rng = rng_from_seed(derive_seed(seed, streams::VERIFY, 0x10));
    let mut worst_idem = 0.0f64;
    let mut worst_div = 0.0f64;
    let mut worst_skew = 0.0f64;
    for _ in 0..budget.operator_trials {
        let u = sampler.sample(&mut rng);
        let v = sampler.sample(&mut rng);
        let pu = leray_project(&u);
        let ppu = leray_project(&pu);
        let denom = pu.sobolev_norm_sq(SobolevOrder::H0).sqrt();
        if denom > 0.0 {
            worst_idem = worst_idem
                .max(ppu.sub(&pu).sobolev_norm_sq(SobolevOrder::H0).sqrt() / denom);
        }
        let b = nonlinear_term(&u, &v).expect("same grid");
        worst_div = worst_div.max(b.divergence_error());
        let pairing = b.inner_product(&v, SobolevOrder::H0).unwrap().abs();
        worst_skew = worst_skew.max(pairing / (u.h1_norm_sq().sqrt() * v.h1_norm_sq()));
    }
    #[derive(Serialize)]
    struct OperatorReport {
        trials: usize,
        worst_idempotence: f64,
        worst_divergence: f64,
        worst_skew_ratio: f64,
    }
    let rep = OperatorReport {
        trials: budget.operator_trials,
        worst_idempotence: worst_idem,
        worst_divergence: worst_div,
        worst_skew_ratio: worst_skew,
    };
    let pass = worst_idem <= 1e-10 && worst_div <= 1e-10 && worst_skew <= 1e-10;
    vec![outcome(
        "operators",
        pass,
        format!("idempotence {worst_idem:.2e}, divergence {worst_div:.2e}, skew {worst_skew:.2e}"),
        &rep,
    )]
}

fn taming_check(problem: &Problem) -> CheckOutcome {
    let spec = problem.solver.taming;
    let n = spec.threshold();
    let mut exact = spec.value(0.5 * n).unwrap_or(1.0) == 0.0 || n == 0.0;
    exact &= spec.value(n + 2.0).unwrap() == 2.0;
    let cap = spec.derivative_cap();
    let h = 1e-4;
    let mut worst_fd = 0.0f64;
    let mut cap_ok = true;
    let mut r = h;
    while r <= n + 3.0 - h {
        let fd = (spec.value(r + h).unwrap() - spec.value(r - h).unwrap()) / (2.0 * h);
        let d = spec.derivative(r).unwrap();
        worst_fd = worst_fd.max((fd - d).abs());
        cap_ok &= (-1e-12..=cap + 1e-12).contains(&d);
        r += h;
    }
    #[derive(Serialize)]
    struct TamingReport {
        threshold: f64,
        derivative_cap: f64,
        worst_fd_deviation: f64,
    }
    let pass = exact && cap_ok && worst_fd <= 1e-6;
    outcome(
        "taming",
        pass,
        format!("fd deviation {worst_fd:.2e}, cap {cap}"),
        &TamingReport {
            threshold: n,
            derivative_cap: cap,
            worst_fd_deviation: worst_fd,
        },
    )
}

fn estimate_checks(problem: &Problem, budget: &Budget, seed: u64) -> Vec<CheckOutcome> {
    let sampler = FieldSampler::new(problem.grid.clone(), 2.0, (0.3, 2.5));
    vf::EstimateId::ALL
        .iter()
        .map(|id| {
            let r = vf::check_estimate(
                *id,
                &sampler,
                &problem.solver.taming,
                budget.estimate_samples,
                budget.estimate_samples,
                seed,
            );
            let detail = format!(
                "constant {:?}, worst residual {:.3e}",
                r.fitted_constant, r.worst_residual
            );
            outcome(id.name(), r.passed, detail, &r)
        })
        .collect()
}

fn isometry_checks(problem: &Problem, budget: &Budget, seed: u64) -> Vec<CheckOutcome> {
    let grid = problem.grid.clone();
    let marks = &problem.marks;
    let k = marks.len();
    let sampler = FieldSampler::with_norm(grid.clone(), 2.5, 0.8);
    let mut rng = rng_from_seed(derive_seed(seed, streams::VERIFY, 0x20));
    let mk_fields = |rng: &mut rand_chacha::ChaCha8Rng, count: usize| -> Vec<SpectralField> {
        (0..count).map(|_| sampler.sample(rng)).collect()
    };
    let presets: Vec<(&str, vf::StepIntegrand)> = vec![
        (
            "isometry-zero",
            vf::StepIntegrand::constant(1.0, (0..k).map(|_| SpectralField::zeros(grid.clone())).collect())
                .unwrap(),
        ),
        (
            "isometry-constant",
            vf::StepIntegrand::constant(1.0, mk_fields(&mut rng, k)).unwrap(),
        ),
        (
            "isometry-two-phase",
            vf::StepIntegrand::new(vec![0.0, 0.5, 1.0], mk_fields(&mut rng, 2 * k), k).unwrap(),
        ),
    ];
    presets
        .into_iter()
        .enumerate()
        .map(|(i, (name, x))| {
            let r = vf::check_isometry(&x, marks, budget.mc_replicas, derive_seed(seed, 0x21, i as u64))
                .expect("integrand matches marks");
            let detail = format!(
                "exact {}, estimate {} (se {})",
                format_sig(r.exact, 6),
                format_sig(r.estimate, 6),
                format_sig(r.std_error, 3)
            );
            outcome(name, r.passed, detail, &r)
        })
        .collect()
}

fn thinning_check(problem: &Problem, budget: &Budget, seed: u64) -> CliResult<CheckOutcome> {
    let control = problem
        .control
        .clone()
        .unwrap_or_else(|| default_thinning_control(problem.marks.len()));
    let eps = problem.eps.unwrap_or(0.25);
    let r = vf::check_thinning(&control, eps, &problem.marks, budget.mc_replicas, 0.01, seed)?;
    let worst = r
        .cells
        .iter()
        .map(|c| c.statistic / c.critical_value.max(1e-300))
        .fold(0.0f64, f64::max);
    Ok(outcome(
        "thinning",
        r.passed,
        format!("{} cells, worst statistic ratio {worst:.2}", r.cells.len()),
        &r,
    ))
}

fn default_thinning_control(marks: usize) -> Control {
    Control::new(
        vec![0.0, 0.5, 1.0],
        vec![vec![2.0; marks], vec![0.5; marks]],
    )
    .unwrap()
}

fn cost_checks(problem: &Problem, seed: u64) -> Vec<CheckOutcome> {
    let marks1 = MarkSpace::new(vec![1.0]).unwrap();
    let ones = Control::constant(1.0, 1.0, 1).unwrap();
    let twos = Control::constant(2.0, 1.0, 1).unwrap();
    let exact_two = 2.0 * (2.0f64).ln() - 1.0;
    let c1 = ones.cost(&marks1).unwrap();
    let c2 = twos.cost(&marks1).unwrap();
    let digits_ok = format_sig(c2, 12) == format_sig(exact_two, 12);

    let mut rng = rng_from_seed(derive_seed(seed, streams::VERIFY, 0x30));
    let mut convex_ok = true;
    use rand::Rng;
    for _ in 0..100 {
        let a = Control::constant(rng.random_range(0.0..4.0), 1.0, problem.marks.len()).unwrap();
        let b = Control::constant(rng.random_range(0.0..4.0), 1.0, problem.marks.len()).unwrap();
        let mid = a.blend(&b, 0.5).unwrap();
        let lhs = mid.cost(&problem.marks).unwrap();
        let rhs =
            0.5 * (a.cost(&problem.marks).unwrap() + b.cost(&problem.marks).unwrap());
        convex_ok &= lhs <= rhs + 1e-12;
    }
    #[derive(Serialize)]
    struct CostReport {
        unit_cost: f64,
        double_cost: f64,
        l_zero: f64,
        convexity_pairs: usize,
    }
    let rep = CostReport {
        unit_cost: c1,
        double_cost: c2,
        l_zero: running_cost(0.0),
        convexity_pairs: 100,
    };
    let pass = c1 == 0.0 && digits_ok && running_cost(0.0) == 1.0 && convex_ok;
    vec![outcome(
        "cost",
        pass,
        format!("L(1)={c1}, L(2)={}", format_sig(c2, 12)),
        &rep,
    )]
}

fn stability_check(problem: &Problem, seed: u64) -> CliResult<CheckOutcome> {
    let control = problem
        .control
        .clone()
        .unwrap_or_else(|| Control::constant(1.0, problem.solver.t_end, problem.marks.len()).unwrap());
    let r = vf::stability_probe(
        &problem.u0,
        &control,
        &problem.sigma,
        &problem.marks,
        &problem.solver,
        &[1e-3, 1e-4, 1e-5],
        seed,
    )?;
    Ok(outcome(
        "stability",
        r.passed,
        format!(
            "amplification {:?}, spread {:.3}, gronwall weight {:.3}",
            r.amplification, r.spread, r.gronwall_weight
        ),
        &r,
    ))
}

fn refinement_checks(problem: &Problem) -> CliResult<Vec<CheckOutcome>> {
    let control = problem
        .control
        .clone()
        .unwrap_or_else(|| Control::constant(1.0, problem.solver.t_end, problem.marks.len()).unwrap());
    let rp = vf::RefinementProblem {
        u0: &problem.u0,
        control: &control,
        sigma: &problem.sigma,
        marks: &problem.marks,
        cfg: &problem.solver,
    };
    let base_dt = problem.solver.dt;
    let dt_ladder = vec![base_dt, base_dt / 2.0, base_dt / 4.0, base_dt / 8.0];
    let dt_report = vf::refinement_study(&rp, &vf::RefinementLadder::Dt(dt_ladder))?;
    let order = dt_report.estimated_order.unwrap_or(f64::NAN);
    let dt_pass = dt_report.passed && (dt_report.errors.iter().all(|e| *e == 0.0) || order >= 1.7);
    let dt_outcome = outcome(
        "refinement-dt",
        dt_pass,
        format!("errors {:?}, order {order:.2}", dt_report.errors),
        &dt_report,
    );

    let modes_report = vf::refinement_study(&rp, &vf::RefinementLadder::Modes(vec![16, 32, 64, 128]))?;
    let modes_outcome = outcome(
        "refinement-modes",
        modes_report.passed,
        format!("errors {:?}", modes_report.errors),
        &modes_report,
    );
    Ok(vec![dt_outcome, modes_outcome])
}

pub fn cmd_verify(
    suite: Suite,
    config: Option<&RunConfig>,
    base_dir: &Path,
    trials: Option<usize>,
    out_dir: Option<&Path>,
    seed_override: Option<u64>,
) -> CliResult<()> {
    let config = match config {
        Some(c) => c.clone(),
        None => default_verify_config(),
    };
    let problem = config.build(base_dir)?;
    let seed = seed_override.unwrap_or(config.seed);
    let budget = Budget::new(trials);

    let mut outcomes: Vec<CheckOutcome> = Vec::new();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Operators) {
        outcomes.extend(operator_checks(&problem, &budget, seed));
    }
    if want(Suite::Taming) {
        outcomes.push(taming_check(&problem));
    }
    if want(Suite::Estimates) {
        outcomes.extend(estimate_checks(&problem, &budget, seed));
    }
    if want(Suite::Isometry) {
        outcomes.extend(isometry_checks(&problem, &budget, seed));
    }
    if want(Suite::Thinning) {
        outcomes.push(thinning_check(&problem, &budget, seed)?);
    }
    if want(Suite::Cost) {
        outcomes.extend(cost_checks(&problem, seed));
    }
    if want(Suite::Stability) {
        outcomes.push(stability_check(&problem, seed)?);
    }
    if want(Suite::Refinement) {
        outcomes.extend(refinement_checks(&problem)?);
    }

    let mut failed = 0usize;
    for o in &outcomes {
        println!(
            "{} {} - {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        if !o.passed {
            failed += 1;
        }
    }
    if let Some(dir) = out_dir {
        let reports: serde_json::Map<String, serde_json::Value> = outcomes
            .iter()
            .filter_map(|o| o.report_json.clone().map(|r| (o.name.clone(), r)))
            .collect();
        let doc = serde_json::json!({
            "seed": seed,
            "passed": failed == 0,
            "reports": reports,
        });
        let mut bytes = serde_json::to_vec_pretty(&doc).expect("reports serialize");
        bytes.push(b'\n');
        write_atomic(&dir.join("verify_reports.json"), &bytes)?;
    }
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} check(s) failed")));
    }
    Ok(())
}

/// Desk-scale defaults used by `tns verify` when no config is given.
pub fn default_verify_config() -> RunConfig {
    use crate::config::*;
    RunConfig {
        problem: ProblemBlock {
            grid_n: 16,
            taming_threshold: 1.0,
            initial: FieldSpec::Random {
                decay: 2.0,
                scale: 0.5,
                seed: 1,
            },
        },
        noise: NoiseBlock {
            smoothing_cutoff: 2,
            marks: vec![
                MarkSpec {
                    weight: 1.0,
                    scale: 0.2,
                    additive: FieldSpec::Random {
                        decay: 2.5,
                        scale: 0.1,
                        seed: 11,
                    },
                },
                MarkSpec {
                    weight: 0.5,
                    scale: -0.12,
                    additive: FieldSpec::Random {
                        decay: 2.5,
                        scale: 0.08,
                        seed: 12,
                    },
                },
            ],
        },
        control: Some(ControlBlock::Inline(
            Control::new(
                vec![0.0, 0.25, 0.5],
                vec![vec![2.0, 0.5], vec![0.7, 1.8]],
            )
            .unwrap()
            .to_file_format(),
        )),
        solver: SolverBlock {
            dt: 1e-3,
            t_end: 0.5,
            eps: Some(0.1),
            snapshot_stride: 10,
            truncation: None,
        },
        experiment: None,
        output: None,
        seed: 20_240_001,
    }
}

// ---- cost -------------------------------------------------------------------

pub fn cmd_cost(
    control_path: &Path,
    weights: Option<&str>,
    config: Option<&RunConfig>,
) -> CliResult<()> {
    let control = tns_core::io::read_control_file(control_path)?;
    let marks = match (weights, config) {
        (Some(w), _) => {
            let ws: Vec<f64> = w
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Validation(format!("bad weight '{s}': {e}")))
                })
                .collect::<CliResult<Vec<f64>>>()?;
            MarkSpace::new(ws)?
        }
        (None, Some(cfg)) => MarkSpace::new(cfg.noise.marks.iter().map(|m| m.weight).collect())?,
        (None, None) => {
            return Err(CliError::Validation(
                "cost needs mark weights: pass --weights or --config".into(),
            ))
        }
    };
    let cost = control.cost(&marks)?;
    println!("{}", format_sig(cost, 12));
    Ok(())
}

// ---- shared plumbing ---------------------------------------------------------

pub fn resolve_out_dir(config: &RunConfig, cli_out: Option<PathBuf>) -> CliResult<PathBuf> {
    cli_out
        .or_else(|| config.output.clone())
        .ok_or_else(|| CliError::Validation("no output directory: pass --out or set output".into()))
}

