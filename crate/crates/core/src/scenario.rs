//! Scenario runner: parses a TOML config, dispatches to the owning
//! module, writes byte-stable CSV / JSON-lines artifacts and returns a
//! run summary. Every physically meaningful parameter is explicit;
//! missing keys are configuration errors. Tolerances default per module
//! and are echoed into the summary.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::mss::{self, SimBody, SimConfig, SimForce, ValidationReport};
use crate::qmss::{individuation_report, simulate_gravity, validate_q, QBody};
use crate::qset::suite::{exhaustive_universes, random_universe, run_suite};
use crate::quantum::{count_configurations, joint_spin_measure, singlet, OccupancyMode};
use crate::qset::Species;
use crate::seeding;
use crate::vec3::Vec3;

pub const DEFAULT_MSS_TOL: f64 = 1e-4;
pub const DEFAULT_INDIST_EPS: f64 = 1e-9;
pub const DEFAULT_EPS_MIN: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("run error: {0}")]
    Run(String),
}

impl From<mss::MssError> for ScenarioError {
    fn from(e: mss::MssError) -> Self {
        ScenarioError::Run(e.to_string())
    }
}

impl From<crate::qmss::QmssError> for ScenarioError {
    fn from(e: crate::qmss::QmssError) -> Self {
        ScenarioError::Run(e.to_string())
    }
}

impl From<crate::quantum::QuantumError> for ScenarioError {
    fn from(e: crate::quantum::QuantumError) -> Self {
        ScenarioError::Run(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

/// 12 significant digits, fixed exponent form — the float formatting of
/// every artifact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: String,
    pub seed: Option<u64>,
    pub qset: Option<QsetParams>,
    pub sim: Option<SimParams>,
    pub ensemble: Option<EnsembleParams>,
    pub eprb: Option<EprbParams>,
    pub stats: Option<StatsParams>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QsetParams {
    pub random_universes: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimParams {
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
    pub internal: String,
    pub gamma: Option<f64>,
    pub tol: Option<f64>,
    pub body: Vec<BodyParams>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyParams {
    pub id: Option<String>,
    pub mass: f64,
    pub pos: [f64; 3],
    pub vel: [f64; 3],
    pub external: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleParams {
    pub species: String,
    pub n: u64,
    pub eps: Option<f64>,
    pub eps_min: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EprbParams {
    pub a_theta: f64,
    pub a_phi: f64,
    pub b_theta: f64,
    pub b_phi: f64,
    pub trials: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsParams {
    pub n_max: u64,
    pub k_max: u64,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub kind: String,
    pub seed: u64,
    pub checks_passed: u64,
    pub checks_failed: u64,
    /// Key metrics in insertion-stable order.
    pub metrics: Vec<(String, f64)>,
    pub duration_secs: f64,
}

impl RunSummary {
    pub fn all_pass(&self) -> bool {
        self.checks_failed == 0
    }
}

/// Parses and validates a config file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = fs::read_to_string(path)?;
    let cfg: ScenarioConfig =
        toml::from_str(&text).map_err(|e| ScenarioError::Config(e.to_string()))?;
    match cfg.kind.as_str() {
        "qset-suite" => require(cfg.qset.is_some(), "qset-suite needs a [qset] block")?,
        "mss-sim" => require(cfg.sim.is_some(), "mss-sim needs a [sim] block")?,
        "quasi-mss-sim" => require(
            cfg.sim.is_some() && cfg.ensemble.is_some(),
            "quasi-mss-sim needs [sim] and [ensemble] blocks",
        )?,
        "eprb" => require(cfg.eprb.is_some(), "eprb needs an [eprb] block")?,
        "stats" => require(cfg.stats.is_some(), "stats needs a [stats] block")?,
        other => return Err(ScenarioError::Config(format!("unknown kind `{other}`"))),
    }
    Ok(cfg)
}

fn require(ok: bool, msg: &str) -> Result<(), ScenarioError> {
    if ok {
        Ok(())
    } else {
        Err(ScenarioError::Config(msg.to_string()))
    }
}

fn direction(theta: f64, phi: f64) -> Vec3 {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

/// Runs the scenario, writing artifacts into `out_dir`. The summary file
/// format follows `format`; module artifacts have fixed formats.
pub fn run(
    cfg: &ScenarioConfig,
    seed_override: Option<u64>,
    out_dir: &Path,
    format: OutputFormat,
) -> Result<RunSummary, ScenarioError> {
    fs::create_dir_all(out_dir)?;
    let seed = seed_override.or(cfg.seed).unwrap_or(0);
    let start = Instant::now();
    let mut summary = match cfg.kind.as_str() {
        "qset-suite" => run_qset_suite(cfg.qset.as_ref().unwrap(), seed, out_dir)?,
        "mss-sim" => run_mss_sim(cfg.sim.as_ref().unwrap(), seed, out_dir)?,
        "quasi-mss-sim" => run_quasi_mss_sim(
            cfg.sim.as_ref().unwrap(),
            cfg.ensemble.as_ref().unwrap(),
            seed,
            out_dir,
        )?,
        "eprb" => run_eprb(cfg.eprb.as_ref().unwrap(), seed, out_dir)?,
        "stats" => run_stats(cfg.stats.as_ref().unwrap(), seed, out_dir)?,
        other => return Err(ScenarioError::Config(format!("unknown kind `{other}`"))),
    };
    summary.duration_secs = start.elapsed().as_secs_f64();
    emit(&summary, format, out_dir)?;
    Ok(summary)
}

/// Writes the summary file. Byte-stable except for the wall-clock
/// duration, which lives in its own trailing field/record.
pub fn emit(
    summary: &RunSummary,
    format: OutputFormat,
    out_dir: &Path,
) -> Result<(), ScenarioError> {
    let path = out_dir.join(match format {
        OutputFormat::Csv => "summary.csv",
        OutputFormat::Jsonl => "summary.jsonl",
    });
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str("field,value\n");
            out.push_str(&format!("kind,{}\n", summary.kind));
            out.push_str(&format!("seed,{}\n", summary.seed));
            out.push_str(&format!("checks_passed,{}\n", summary.checks_passed));
            out.push_str(&format!("checks_failed,{}\n", summary.checks_failed));
            for (k, v) in &summary.metrics {
                out.push_str(&format!("{k},{}\n", fmt_f64(*v)));
            }
            out.push_str(&format!("duration_secs,{}\n", fmt_f64(summary.duration_secs)));
        }
        OutputFormat::Jsonl => {
            out.push_str(&format!(
                "{{\"kind\":\"{}\",\"seed\":{},\"checks_passed\":{},\"checks_failed\":{}}}\n",
                summary.kind, summary.seed, summary.checks_passed, summary.checks_failed
            ));
            for (k, v) in &summary.metrics {
                out.push_str(&format!("{{\"metric\":\"{k}\",\"value\":{}}}\n", fmt_f64(*v)));
            }
            out.push_str(&format!(
                "{{\"duration_secs\":{}}}\n",
                fmt_f64(summary.duration_secs)
            ));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

fn run_qset_suite(
    p: &QsetParams,
    seed: u64,
    out_dir: &Path,
) -> Result<RunSummary, ScenarioError> {
    let mut universes = exhaustive_universes();
    let mut rng = seeding::trial_rng(seed, 0);
    for _ in 0..p.random_universes {
        universes.push(random_universe(&mut rng));
    }
    let checks = run_suite(&universes);
    let mut lines = String::new();
    let mut passed = 0;
    let mut failed = 0;
    for c in &checks {
        lines.push_str(&serde_json::to_string(c).expect("serializable"));
        lines.push('\n');
        if c.pass {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    fs::write(out_dir.join("checks.jsonl"), lines)?;
    Ok(RunSummary {
        kind: "qset-suite".into(),
        seed,
        checks_passed: passed,
        checks_failed: failed,
        metrics: vec![("universes".into(), universes.len() as f64)],
        duration_secs: 0.0,
    })
}

fn sim_config(p: &SimParams) -> Result<SimConfig, ScenarioError> {
    let internal = match p.internal.as_str() {
        "none" => SimForce::None,
        "gravity" => SimForce::Gravity {
            gamma: p
                .gamma
                .ok_or_else(|| ScenarioError::Config("gravity needs gamma".into()))?,
        },
        other => {
            return Err(ScenarioError::Config(format!(
                "unknown internal force `{other}`"
            )))
        }
    };
    let mut bodies = Vec::new();
    let mut external = BTreeMap::new();
    for (i, b) in p.body.iter().enumerate() {
        let id = b.id.clone().unwrap_or_else(|| format!("p{i}"));
        if let Some(f) = b.external {
            external.insert(id.clone(), f);
        }
        bodies.push(SimBody {
            id,
            mass: b.mass,
            pos: b.pos,
            vel: b.vel,
        });
    }
    Ok(SimConfig {
        bodies,
        internal,
        external,
        t0: p.t0,
        t1: p.t1,
        h: p.h,
    })
}

fn write_trajectories(
    particles: Vec<(String, &mss::Trajectory)>,
    out_dir: &Path,
) -> Result<(), ScenarioError> {
    let mut csv = String::from("particle,t,x,y,z\n");
    for (id, traj) in particles {
        for (t, s) in traj.sample_times().zip(traj.samples()) {
            csv.push_str(&format!(
                "{id},{},{},{},{}\n",
                fmt_f64(t),
                fmt_f64(s[0]),
                fmt_f64(s[1]),
                fmt_f64(s[2])
            ));
        }
    }
    fs::write(out_dir.join("trajectory.csv"), csv)?;
    Ok(())
}

fn write_validation(report: &ValidationReport, out_dir: &Path) -> Result<(), ScenarioError> {
    let mut lines = String::new();
    for c in &report.checks {
        lines.push_str(&serde_json::to_string(c).expect("serializable"));
        lines.push('\n');
    }
    fs::write(out_dir.join("validation.jsonl"), lines)?;
    Ok(())
}

fn run_mss_sim(p: &SimParams, seed: u64, out_dir: &Path) -> Result<RunSummary, ScenarioError> {
    let cfg = sim_config(p)?;
    let tol = p.tol.unwrap_or(DEFAULT_MSS_TOL);
    let sys = mss::simulate(&cfg)?;
    let grid = sys.sample_times();
    let report = mss::validate(&sys, tol, &grid);
    write_validation(&report, out_dir)?;
    let parts: Result<Vec<_>, mss::MssError> = sys
        .particles()
        .map(|id| sys.trajectory(id).map(|t| (id.clone(), t)))
        .collect();
    write_trajectories(parts?, out_dir)?;
    let passed = report.checks.iter().filter(|c| c.pass).count() as u64;
    let failed = report.checks.len() as u64 - passed;
    Ok(RunSummary {
        kind: "mss-sim".into(),
        seed,
        checks_passed: passed,
        checks_failed: failed,
        metrics: vec![
            ("tol".into(), tol),
            ("max_residual".into(), report.max_residual()),
        ],
        duration_secs: 0.0,
    })
}

fn run_quasi_mss_sim(
    p: &SimParams,
    e: &EnsembleParams,
    seed: u64,
    out_dir: &Path,
) -> Result<RunSummary, ScenarioError> {
    if e.n != p.body.len() as u64 {
        return Err(ScenarioError::Config(format!(
            "ensemble n = {} but {} bodies configured",
            e.n,
            p.body.len()
        )));
    }
    let gamma = match p.internal.as_str() {
        "gravity" => p
            .gamma
            .ok_or_else(|| ScenarioError::Config("gravity needs gamma".into()))?,
        other => {
            return Err(ScenarioError::Config(format!(
                "quasi-mss-sim supports internal = \"gravity\" only, got `{other}`"
            )))
        }
    };
    let tol = p.tol.unwrap_or(DEFAULT_MSS_TOL);
    let eps = e.eps.unwrap_or(DEFAULT_INDIST_EPS);
    let eps_min = e.eps_min.unwrap_or(DEFAULT_EPS_MIN);
    let bodies: Vec<QBody> = p
        .body
        .iter()
        .map(|b| QBody {
            mass: b.mass,
            pos: b.pos,
            vel: b.vel,
        })
        .collect();
    let sys = simulate_gravity(
        Species::new(e.species.clone()),
        &bodies,
        gamma,
        p.h,
        eps_min,
        p.t0,
        p.t1,
    )?;
    let grid = sys.sample_times();
    let report = validate_q(&sys, tol, &grid);
    write_validation(&report, out_dir)?;
    let parts: Vec<(String, &mss::Trajectory)> = sys
        .particles()
        .iter()
        .enumerate()
        .map(|(i, q)| (format!("{}-{i}", e.species), &q.traj))
        .collect();
    write_trajectories(parts, out_dir)?;

    // individuation at a bounded number of evenly strided sample times
    let stride = (grid.len() / 100).max(1);
    let times: Vec<f64> = grid.iter().copied().step_by(stride).collect();
    let ind = individuation_report(&sys, &times, eps)?;
    let mut csv = String::from("t,class_index,class_size\n");
    for row in &ind.rows {
        for (i, size) in row.class_sizes.iter().enumerate() {
            csv.push_str(&format!("{},{i},{size}\n", fmt_f64(row.t)));
        }
    }
    fs::write(out_dir.join("individuation.csv"), csv)?;

    let passed = report.checks.iter().filter(|c| c.pass).count() as u64;
    let failed = report.checks.len() as u64 - passed;
    Ok(RunSummary {
        kind: "quasi-mss-sim".into(),
        seed,
        checks_passed: passed,
        checks_failed: failed,
        metrics: vec![
            ("tol".into(), tol),
            ("eps".into(), eps),
            ("max_residual".into(), report.max_residual()),
            (
                "min_class_count".into(),
                ind.rows
                    .iter()
                    .map(|r| r.class_sizes.len())
                    .min()
                    .unwrap_or(0) as f64,
            ),
        ],
        duration_secs: 0.0,
    })
}

fn run_eprb(p: &EprbParams, seed: u64, out_dir: &Path) -> Result<RunSummary, ScenarioError> {
    if p.trials == 0 {
        return Err(ScenarioError::Config("eprb needs trials >= 1".into()));
    }
    let a = direction(p.a_theta, p.a_phi);
    let b = direction(p.b_theta, p.b_phi);
    let psi = singlet();
    let outcomes: Result<Vec<(i8, i8)>, _> = (0..p.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeding::trial_rng(seed, i);
            joint_spin_measure(&psi, a, b, &mut rng)
        })
        .collect();
    let outcomes = outcomes?;

    let mut csv = String::from("trial,outcome_a,outcome_b\n");
    let mut counts = [[0u64; 2]; 2];
    let mut product_sum = 0i64;
    for (i, (oa, ob)) in outcomes.iter().enumerate() {
        csv.push_str(&format!("{i},{oa},{ob}\n"));
        counts[usize::from(*oa > 0)][usize::from(*ob > 0)] += 1;
        product_sum += i64::from(oa * ob);
    }
    fs::write(out_dir.join("trials.csv"), csv)?;

    let n = p.trials as f64;
    let correlation = product_sum as f64 / n;
    let std_error = ((1.0 - correlation * correlation) / n).sqrt();
    let record = format!(
        "{{\"counts\":{{\"mm\":{},\"mp\":{},\"pm\":{},\"pp\":{}}},\"correlation\":{},\"std_error\":{}}}\n",
        counts[0][0],
        counts[0][1],
        counts[1][0],
        counts[1][1],
        fmt_f64(correlation),
        fmt_f64(std_error)
    );
    fs::write(out_dir.join("eprb.jsonl"), record)?;

    Ok(RunSummary {
        kind: "eprb".into(),
        seed,
        checks_passed: 1,
        checks_failed: 0,
        metrics: vec![
            ("trials".into(), n),
            ("correlation".into(), correlation),
            ("std_error".into(), std_error),
        ],
        duration_secs: 0.0,
    })
}

fn run_stats(p: &StatsParams, seed: u64, out_dir: &Path) -> Result<RunSummary, ScenarioError> {
    if p.k_max == 0 {
        return Err(ScenarioError::Config("stats needs k_max >= 1".into()));
    }
    let mut csv = String::from("n,k,individuals,nonindividuals\n");
    let mut passed = 0u64;
    let mut failed = 0u64;
    for n in 0..=p.n_max {
        for k in 1..=p.k_max {
            let ind = count_configurations(n, k, OccupancyMode::Individuals)?;
            let non = count_configurations(n, k, OccupancyMode::NonIndividuals)?;
            csv.push_str(&format!("{n},{k},{ind},{non}\n"));
            // labelled counts dominate occupancy-vector counts
            if ind >= non {
                passed += 1;
            } else {
                failed += 1;
            }
        }
    }
    fs::write(out_dir.join("counts.csv"), csv)?;
    Ok(RunSummary {
        kind: "stats".into(),
        seed,
        checks_passed: passed,
        checks_failed: failed,
        metrics: vec![
            ("n_max".into(), p.n_max as f64),
            ("k_max".into(), p.k_max as f64),
        ],
        duration_secs: 0.0,
    })
}
