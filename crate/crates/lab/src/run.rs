//! Running an experiment: resolve the input, compute or load every step,
//! then write the CSV rows and the JSON summary in schedule order.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use abtorsion::alexmod::{alexander_polynomial, presentation_rank_seeded};
use abtorsion::covers::{
    betti_deviation_report, cover_homology, det_prime_via_characters, module_cover_homology, BettiDeviationReport, CoverHomologyReport,
    GrowthStep, CSV_HEADER,
};
use abtorsion::lattice::MAX_ALPHA_RANK;
use abtorsion::laurent::cyclic_resultant;
use abtorsion::mahler::{default_numeric_grid, fk_det_numeric, fk_log_det_exact, mahler_multivariate, MahlerEstimate, Strategy};
use abtorsion::Sublattice;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cache::{Cache, CACHE_FORMAT};
use crate::config::{ExperimentConfig, Kind, Route};
use crate::error::{LabError, LabResult};
use crate::input::Subject;
use crate::report::{csv_text, fmt_float, write, FailedStep, Summary};

pub const MAHLER_HEADER: &str = "method,value,error_budget,samples,zeros_skipped";
pub const ALEXANDER_HEADER: &str = "l,delta";
pub const FKDET_HEADER: &str = "schedule_param,index,alpha,log_det_prime,log_det_prime_normalized";
pub const BETTI_HEADER: &str = "schedule_param,index,alpha,degree,betti,l2_prediction,deviation,bound,within";

/// Overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Worker threads; all available cores when `None`.
    pub jobs: Option<usize>,
    /// Defaults to `.cache` inside the output directory.
    pub cache_dir: Option<PathBuf>,
}

/// The result of one step, exactly as cached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum StepResult {
    Mahler { estimate: MahlerEstimate<f64> },
    Alexander { rank: usize, ideals: Vec<String> },
    Cover { step: GrowthStep },
    Determinant { param: String, index: u64, alpha: Option<u64>, log_det_prime: f64 },
    Betti { param: String, report: BettiDeviationReport },
}

impl StepResult {
    fn csv_rows(&self) -> Vec<String> {
        match self {
            Self::Mahler { estimate: e } => {
                vec![format!("{},{},{},{},{}", e.method, fmt_float(e.value), fmt_float(e.error_budget), e.samples, e.zeros_skipped)]
            }
            Self::Alexander { ideals, .. } => ideals.iter().enumerate().map(|(l, d)| format!("{l},{d}")).collect(),
            Self::Cover { step } => vec![step.csv_row()],
            Self::Determinant { param, index, alpha, log_det_prime } => vec![format!(
                "{param},{index},{},{},{}",
                alpha.map(|a| a.to_string()).unwrap_or_default(),
                fmt_float(*log_det_prime),
                fmt_float(log_det_prime / *index as f64)
            )],
            Self::Betti { param, report } => report
                .degrees
                .iter()
                .map(|d| {
                    format!(
                        "{param},{},{},{},{},{},{},{},{}",
                        report.index,
                        report.alpha,
                        d.degree,
                        d.betti,
                        d.l2_prediction,
                        d.deviation,
                        fmt_float(d.bound),
                        d.within
                    )
                })
                .collect(),
        }
    }

    /// The per-step quantity a convergence summary tracks.
    fn normalized(&self) -> Option<f64> {
        match self {
            Self::Cover { step } => Some(step.report.log_torsion_normalized),
            Self::Determinant { index, log_det_prime, .. } => Some(log_det_prime / *index as f64),
            _ => None,
        }
    }
}

fn header(kind: Kind) -> &'static str {
    match kind {
        Kind::Mahler => MAHLER_HEADER,
        Kind::Alexander => ALEXANDER_HEADER,
        Kind::CoverHomology | Kind::ConvergeCyclic | Kind::ConvergeGpm => CSV_HEADER,
        Kind::FkdetApprox => FKDET_HEADER,
        Kind::BettiDeviation => BETTI_HEADER,
    }
}

#[derive(Clone, Copy, Debug)]
enum StepSpec {
    Single,
    Scheduled(usize),
    Explicit(usize),
}

fn step_specs(config: &ExperimentConfig) -> Vec<StepSpec> {
    if !config.kind.uses_lattices() {
        return vec![StepSpec::Single];
    }
    let scheduled = config.schedule.as_ref().map_or(0, |s| s.len());
    (0..scheduled).map(StepSpec::Scheduled).chain((0..config.lattices.len()).map(StepSpec::Explicit)).collect()
}

fn step_param(config: &ExperimentConfig, spec: StepSpec) -> String {
    match spec {
        StepSpec::Single => config.kind.name().to_string(),
        StepSpec::Scheduled(k) => config.schedule.as_ref().expect("scheduled step").param(k),
        StepSpec::Explicit(k) => format!("h{}", k + 1),
    }
}

/// The lattice of a step, with any schedule warning.
fn step_lattice(config: &ExperimentConfig, spec: StepSpec, m: usize) -> abtorsion::Result<(Sublattice, Option<String>)> {
    match spec {
        StepSpec::Single => unreachable!("single steps have no lattice"),
        StepSpec::Scheduled(k) => config.schedule.as_ref().expect("scheduled step").lattice(k, m),
        StepSpec::Explicit(k) => Ok((Sublattice::from_generators(config.lattices[k].clone())?, None)),
    }
}

/// Everything a step's result depends on.
fn step_key(config: &ExperimentConfig, subject: &Subject, spec: StepSpec) -> String {
    let lattice = match spec {
        StepSpec::Single => json!(null),
        StepSpec::Scheduled(k) => json!({"schedule": config.schedule, "step": k}),
        StepSpec::Explicit(k) => json!({"generators": config.lattices[k]}),
    };
    Cache::key(&json!({
        "format": CACHE_FORMAT,
        "version": env!("CARGO_PKG_VERSION"),
        "kind": config.kind,
        "input": subject.source,
        "lattice": lattice,
        "seed": config.seed,
        "route": config.route,
        "degree": config.degree,
        "strategy": config.strategy,
        "constant": config.constant,
    }))
}

fn alpha_of(h: &Sublattice) -> Option<u64> {
    (h.rank() <= MAX_ALPHA_RANK).then(|| h.alpha_min_norm().ok()).flatten()
}

fn cover_report(config: &ExperimentConfig, subject: &Subject, h: &Sublattice) -> abtorsion::Result<CoverHomologyReport> {
    let degree = config.degree.unwrap_or(subject.default_degree());
    match config.route {
        Route::Module => {
            let (betti, divisors) = module_cover_homology(&subject.presentation, h)?;
            Ok(CoverHomologyReport::new(degree, h.index(), betti, divisors))
        }
        Route::Complex => cover_homology(&subject.complex, h, degree),
        Route::Resultant => {
            if h.rank() != 1 {
                return Err(abtorsion::Error::Domain("the resultant route needs one variable".into()));
            }
            let r = cyclic_resultant(&subject.delta(), h.index())?;
            if r == BigInt::from(0) {
                return Err(abtorsion::Error::Domain(format!("Delta vanishes at an {}-th root of unity; use the module route", h.index())));
            }
            let r = if r < BigInt::from(0) { -r } else { r };
            let divisors = if r == BigInt::from(1) { Vec::new() } else { vec![r] };
            Ok(CoverHomologyReport::new(degree, h.index(), 0, divisors))
        }
    }
}

fn strategy(config: &ExperimentConfig) -> Strategy {
    config.strategy.clone().unwrap_or(Strategy::Auto)
}

fn compute_step(config: &ExperimentConfig, subject: &Subject, spec: StepSpec) -> abtorsion::Result<StepResult> {
    let m = subject.num_vars();
    match config.kind {
        Kind::Mahler => Ok(StepResult::Mahler { estimate: mahler_multivariate(&subject.delta(), &strategy(config))? }),
        Kind::Alexander => {
            let p = &subject.presentation;
            let rank = presentation_rank_seeded(p, config.seed);
            let mut ideals = Vec::with_capacity(p.generators() + 1);
            let mut unit = false;
            for l in 0..=p.generators() {
                ideals.push(if l < rank {
                    "0".to_string()
                } else if unit {
                    "1".to_string()
                } else {
                    let d = alexander_polynomial(p, l);
                    unit = d.is_unit();
                    d.to_string()
                });
            }
            Ok(StepResult::Alexander { rank, ideals })
        }
        Kind::CoverHomology | Kind::ConvergeCyclic | Kind::ConvergeGpm => {
            let (h, _) = step_lattice(config, spec, m)?;
            let report = cover_report(config, subject, &h)?;
            Ok(StepResult::Cover { step: GrowthStep { param: step_param(config, spec), alpha: alpha_of(&h), lattice: h, report } })
        }
        Kind::FkdetApprox => {
            let (h, _) = step_lattice(config, spec, m)?;
            let log_det_prime = det_prime_via_characters::<f64>(subject.presentation.matrix(), &h)?;
            Ok(StepResult::Determinant { param: step_param(config, spec), index: h.index(), alpha: alpha_of(&h), log_det_prime })
        }
        Kind::BettiDeviation => {
            let (h, _) = step_lattice(config, spec, m)?;
            let report = betti_deviation_report(&subject.complex, &h, config.constant.unwrap_or(1.0))?;
            Ok(StepResult::Betti { param: step_param(config, spec), report })
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub summary: Summary,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub cache_dir: PathBuf,
    pub cached_steps: usize,
    pub computed_steps: usize,
}

impl RunOutcome {
    /// 0 when every step completed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed_steps.is_empty() {
            0
        } else {
            2
        }
    }
}

struct StepOutcome {
    param: String,
    result: std::result::Result<StepResult, String>,
    cached: bool,
}

/// Runs `config`, resolving relative input and output paths against `base`.
pub fn run_experiment(config: &ExperimentConfig, base: &Path, opts: &RunOptions) -> LabResult<RunOutcome> {
    let subject = config.input.resolve(base)?;
    let out_dir = base.join(&config.output);
    std::fs::create_dir_all(&out_dir).map_err(|e| LabError::io(out_dir.clone(), e))?;
    let cache = Cache::open(&opts.cache_dir.clone().unwrap_or_else(|| out_dir.join(".cache")))?;

    let specs = step_specs(config);
    let mut warnings = Vec::new();
    if config.kind.uses_lattices() {
        for &spec in &specs {
            if let Ok((_, Some(w))) = step_lattice(config, spec, subject.num_vars()) {
                warnings.push(w);
            }
        }
    }

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().map_err(|e| LabError::Usage(format!("thread pool: {e}")))?;
    let outcomes: Vec<StepOutcome> = pool.install(|| {
        specs
            .par_iter()
            .map(|&spec| {
                let param = step_param(config, spec);
                let key = step_key(config, &subject, spec);
                if let Some(result) = cache.load::<StepResult>(&key) {
                    return StepOutcome { param, result: Ok(result), cached: true };
                }
                let result = compute_step(config, &subject, spec).map_err(|e| e.to_string()).and_then(|r| {
                    // Checkpoint before reporting, so an interrupted run resumes here.
                    cache.store(&key, &r).map_err(|e| e.to_string())?;
                    Ok(r)
                });
                StepOutcome { param, result, cached: false }
            })
            .collect()
    });

    let cached_steps = outcomes.iter().filter(|o| o.cached).count();
    let computed_steps = outcomes.len() - cached_steps;
    let mut rows = Vec::new();
    let mut done: Vec<(&str, &StepResult)> = Vec::new();
    let mut failed_steps = Vec::new();
    for o in &outcomes {
        match &o.result {
            Ok(r) => {
                rows.extend(r.csv_rows());
                done.push((&o.param, r));
            }
            Err(e) => failed_steps.push(FailedStep { param: o.param.clone(), error: e.clone() }),
        }
    }

    let mut summary = Summary {
        kind: config.kind,
        input: subject.label.clone(),
        steps: outcomes.len(),
        completed: done.len(),
        limit_estimate: None,
        target: config.target,
        gap: None,
        tolerance: config.tolerance,
        within_tolerance: None,
        details: BTreeMap::new(),
        warnings,
        failed_steps,
    };
    summarize(config, &subject, &done, &mut summary)?;
    let summary = summary.finish();

    let csv_path = out_dir.join("steps.csv");
    let summary_path = out_dir.join("summary.json");
    write(&csv_path, &csv_text(header(config.kind), &rows))?;
    write(&summary_path, &summary.to_json())?;
    Ok(RunOutcome { summary, csv_path, summary_path, cache_dir: cache.dir().to_path_buf(), cached_steps, computed_steps })
}

fn summarize(config: &ExperimentConfig, subject: &Subject, done: &[(&str, &StepResult)], s: &mut Summary) -> LabResult<()> {
    let d = &mut s.details;
    match config.kind {
        Kind::Mahler => {
            if let Some((_, StepResult::Mahler { estimate: e })) = done.first() {
                s.limit_estimate = Some(e.value);
                d.insert("polynomial".into(), json!(subject.delta().to_string()));
                d.insert("method".into(), json!(e.method));
                d.insert("error_budget".into(), json!(e.error_budget));
                d.insert("samples".into(), json!(e.samples));
                d.insert("zeros_skipped".into(), json!(e.zeros_skipped));
            }
        }
        Kind::Alexander => {
            if let Some((_, StepResult::Alexander { rank, ideals })) = done.first() {
                let first = ideals.iter().position(|x| x != "0").unwrap_or(ideals.len() - 1);
                let delta = subject.delta();
                let est = mahler_multivariate::<f64>(&delta, &strategy(config))?;
                s.limit_estimate = Some(est.value);
                d.insert("rank".into(), json!(rank));
                d.insert("first_nonzero".into(), json!(first));
                d.insert("delta".into(), json!(ideals[first]));
                d.insert("mahler_error_budget".into(), json!(est.error_budget));
            }
        }
        Kind::CoverHomology | Kind::ConvergeCyclic | Kind::ConvergeGpm => {
            s.limit_estimate = done.last().and_then(|(_, r)| r.normalized());
            if config.kind != Kind::CoverHomology && s.target.is_none() {
                let delta = subject.delta();
                let est = mahler_multivariate::<f64>(&delta, &strategy(config))?;
                s.target = Some(est.value);
                d.insert("delta".into(), json!(delta.to_string()));
                d.insert("target_error_budget".into(), json!(est.error_budget));
            }
            if let Some(t) = s.target {
                let gaps: Vec<f64> = done.iter().filter_map(|(_, r)| r.normalized()).map(|v| (v - t).abs()).collect();
                d.insert("gaps".into(), json!(gaps));
            }
        }
        Kind::FkdetApprox => {
            s.limit_estimate = done.last().and_then(|(_, r)| r.normalized());
            if s.target.is_none() {
                let a = subject.presentation.matrix();
                let (target, budget) = if a.is_square() {
                    let e = fk_log_det_exact::<f64>(a)?;
                    (e.value, e.error_budget)
                } else {
                    let e = fk_det_numeric::<f64>(a, default_numeric_grid(a.num_vars()))?;
                    (e.log, e.error_budget)
                };
                s.target = Some(target);
                d.insert("target_error_budget".into(), json!(budget));
            }
        }
        Kind::BettiDeviation => {
            let reports: Vec<&BettiDeviationReport> =
                done.iter().filter_map(|(_, r)| if let StepResult::Betti { report, .. } = r { Some(report) } else { None }).collect();
            let fitted = reports.iter().map(|r| r.max_ratio()).fold(0.0, f64::max);
            let constant = config.constant.unwrap_or(1.0);
            s.limit_estimate = Some(fitted);
            s.target = Some(config.target.unwrap_or(constant));
            d.insert("constant".into(), json!(constant));
            d.insert("violations".into(), json!(reports.iter().map(|r| r.violations()).sum::<usize>()));
        }
    }
    Ok(())
}
