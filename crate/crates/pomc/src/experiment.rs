//! Experiment orchestration: dynamic-constraint runs of the Pareto
//! optimizer against greedy-with-restart, theorem-verification runs on
//! brute-forceable instances, and artifact emission (records, tables,
//! metadata).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{generate_levels, thresholds_at, ChangeSchedule};
use crate::error::{Error, Result};
use crate::greedy::{greedy_solve, StopPolicy};
use crate::matroid::PartitionMatroid;
use crate::maxcut::{MaxCut, WeightedGraph};
use crate::metrics::{
    adaptation_run_budget, check_population_guarantee, static_run_budget, GuaranteeKind,
    GuaranteeReport, InstanceParams,
};
use crate::objective::{Coverage, CountingOracle, Modular, SetFunction};
use crate::pomc::Pomc;
use crate::stats::{aggregate_batches, table_to_csv, ChangeRecord};

/// Default Gaussian step of the threshold-level random walk.
pub const LEVEL_SIGMA: f64 = 0.05;
/// Significance level for the per-change loss-win-tie classification.
pub const ALPHA: f64 = 0.05;

/// Full description of one dynamic max-cut experiment. Everything needed
/// to reproduce the outputs byte-for-byte is in here (and is emitted to
/// the metadata file).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub density: f64,
    pub k: usize,
    pub repetitions: usize,
    pub intervals: Vec<u64>,
    pub m_changes: usize,
    pub graph_seed: u64,
    pub schedule_seed: u64,
    pub run_seed_base: u64,
    pub greedy_stop: StopPolicy,
    pub batch_size: usize,
    /// Explicit levels override the seeded schedule (set when a schedule
    /// file is supplied); recorded in the metadata for reproduction.
    pub schedule_levels: Option<Vec<f64>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 200,
            density: 0.05,
            k: 1,
            repetitions: 30,
            intervals: vec![5000, 10000, 20000],
            m_changes: 200,
            graph_seed: 1,
            schedule_seed: 2,
            run_seed_base: 1000,
            greedy_stop: StopPolicy::PositiveGain,
            batch_size: 50,
            schedule_levels: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n == 0 {
            return fail("n must be positive".into());
        }
        if self.k == 0 || self.n % self.k != 0 {
            return fail(format!("k = {} must be positive and divide n = {}", self.k, self.n));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return fail(format!("density {} outside (0, 1]", self.density));
        }
        let target = (self.density * (self.n * self.n) as f64).floor() as usize;
        if target > self.n * (self.n - 1) / 2 {
            return fail(format!(
                "density {} asks for {target} edges, more than the {} distinct pairs",
                self.density,
                self.n * (self.n - 1) / 2
            ));
        }
        if self.repetitions == 0 {
            return fail("repetitions must be positive".into());
        }
        if self.intervals.is_empty() {
            return fail("need at least one interval setting".into());
        }
        if self.m_changes == 0 {
            return fail("need at least one change".into());
        }
        if self.batch_size == 0 {
            return fail("batch size must be positive".into());
        }
        if let Some(levels) = &self.schedule_levels {
            ChangeSchedule::new(levels.clone(), 0)?;
        }
        Ok(())
    }

    /// Threshold levels: explicit if supplied, otherwise regenerated from
    /// the schedule seed.
    pub fn levels(&self) -> Vec<f64> {
        match &self.schedule_levels {
            Some(levels) => levels.clone(),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.schedule_seed);
                generate_levels(self.m_changes, LEVEL_SIGMA, &mut rng)
            }
        }
    }

    /// Plain-text metadata: `key=value` lines. Parsing this back yields an
    /// equal config, which is how runs are reproduced.
    pub fn to_metadata(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "format=pomc-dynamic-v1");
        let _ = writeln!(out, "rng=chacha8");
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "density={}", self.density);
        let _ = writeln!(out, "k={}", self.k);
        let _ = writeln!(out, "repetitions={}", self.repetitions);
        let _ = writeln!(
            out,
            "intervals={}",
            self.intervals.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
        );
        let _ = writeln!(out, "changes={}", self.m_changes);
        let _ = writeln!(out, "graph_seed={}", self.graph_seed);
        let _ = writeln!(out, "schedule_seed={}", self.schedule_seed);
        let _ = writeln!(out, "run_seed_base={}", self.run_seed_base);
        let _ = writeln!(out, "greedy_stop={}", self.greedy_stop.as_str());
        let _ = writeln!(out, "batch_size={}", self.batch_size);
        if let Some(levels) = &self.schedule_levels {
            let _ = writeln!(
                out,
                "schedule_levels={}",
                levels.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
            );
        }
        out
    }

    pub fn from_metadata(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut saw_format = false;
        let bad = |line: usize, msg: &str| Error::MetadataFormat(format!("line {line}: {msg}"));
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(lineno, "expected key=value"))?;
            match key {
                "format" => {
                    if value != "pomc-dynamic-v1" {
                        return Err(bad(lineno, "unknown format"));
                    }
                    saw_format = true;
                }
                "rng" => {
                    if value != "chacha8" {
                        return Err(bad(lineno, "unknown rng"));
                    }
                }
                "n" => cfg.n = value.parse().map_err(|_| bad(lineno, "bad n"))?,
                "density" => {
                    cfg.density = value.parse().map_err(|_| bad(lineno, "bad density"))?
                }
                "k" => cfg.k = value.parse().map_err(|_| bad(lineno, "bad k"))?,
                "repetitions" => {
                    cfg.repetitions = value.parse().map_err(|_| bad(lineno, "bad repetitions"))?
                }
                "intervals" => {
                    cfg.intervals = value
                        .split(',')
                        .map(|t| t.trim().parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| bad(lineno, "bad intervals"))?;
                }
                "changes" => {
                    cfg.m_changes = value.parse().map_err(|_| bad(lineno, "bad changes"))?
                }
                "graph_seed" => {
                    cfg.graph_seed = value.parse().map_err(|_| bad(lineno, "bad graph_seed"))?
                }
                "schedule_seed" => {
                    cfg.schedule_seed =
                        value.parse().map_err(|_| bad(lineno, "bad schedule_seed"))?
                }
                "run_seed_base" => {
                    cfg.run_seed_base =
                        value.parse().map_err(|_| bad(lineno, "bad run_seed_base"))?
                }
                "greedy_stop" => {
                    cfg.greedy_stop = value.parse().map_err(|e| bad(lineno, &e))?;
                }
                "batch_size" => {
                    cfg.batch_size = value.parse().map_err(|_| bad(lineno, "bad batch_size"))?
                }
                "schedule_levels" => {
                    let levels = value
                        .split(',')
                        .map(|t| t.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<f64>, _>>()
                        .map_err(|_| bad(lineno, "bad schedule_levels"))?;
                    cfg.schedule_levels = Some(levels);
                }
                _ => return Err(bad(lineno, "unknown key")),
            }
        }
        if !saw_format {
            return Err(Error::MetadataFormat("missing format line".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn comment(&self) -> String {
        format!(
            "n={} density={} k={} reps={} changes={} graph_seed={} schedule_seed={} run_seed_base={} greedy_stop={} rng=chacha8",
            self.n,
            self.density,
            self.k,
            self.repetitions,
            self.m_changes,
            self.graph_seed,
            self.schedule_seed,
            self.run_seed_base,
            self.greedy_stop.as_str()
        )
    }
}

/// One line of the records file: a self-describing meta line first, then
/// one change record per line.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RecordLine {
    Meta(RunMeta),
    Change(ChangeRecord),
}

/// Provenance header embedded in the records file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunMeta {
    pub n: usize,
    pub density: f64,
    pub k: usize,
    pub repetitions: usize,
    pub intervals: Vec<u64>,
    pub changes: usize,
    pub graph_seed: u64,
    pub schedule_seed: u64,
    pub run_seed_base: u64,
    pub greedy_stop: StopPolicy,
    pub rng: String,
}

impl RunMeta {
    fn from_config(cfg: &ExperimentConfig) -> Self {
        RunMeta {
            n: cfg.n,
            density: cfg.density,
            k: cfg.k,
            repetitions: cfg.repetitions,
            intervals: cfg.intervals.clone(),
            changes: cfg.m_changes,
            graph_seed: cfg.graph_seed,
            schedule_seed: cfg.schedule_seed,
            run_seed_base: cfg.run_seed_base,
            greedy_stop: cfg.greedy_stop,
            rng: "chacha8".into(),
        }
    }
}

pub fn records_to_jsonl(meta: &RunMeta, records: &[ChangeRecord]) -> String {
    let mut out = String::new();
    let meta_line = serde_json::to_string(&RecordLine::Meta(meta.clone())).expect("serializes");
    out.push_str(&meta_line);
    out.push('\n');
    for r in records {
        let line = serde_json::to_string(&RecordLine::Change(r.clone())).expect("serializes");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn records_from_jsonl(text: &str) -> Result<(Option<RunMeta>, Vec<ChangeRecord>)> {
    let mut meta = None;
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: RecordLine = serde_json::from_str(line).map_err(|e| {
            Error::RecordsFormat(format!("line {}: {e}", idx + 1))
        })?;
        match parsed {
            RecordLine::Meta(m) => {
                if meta.is_some() {
                    return Err(Error::RecordsFormat(format!(
                        "line {}: duplicate meta line",
                        idx + 1
                    )));
                }
                meta = Some(m);
            }
            RecordLine::Change(r) => records.push(r),
        }
    }
    Ok((meta, records))
}

/// In-memory results of a dynamic experiment plus the emitted file paths.
#[derive(Debug)]
pub struct DynamicArtifacts {
    pub records: Vec<ChangeRecord>,
    pub table_csv: String,
    pub records_path: PathBuf,
    pub table_path: PathBuf,
    pub metadata_path: PathBuf,
}

/// Advance one optimizer replication through the whole change sequence and
/// record the best feasible value at the end of each interval.
fn pomc_trajectory(
    graph: &WeightedGraph,
    matroid_template: &PartitionMatroid,
    levels: &[f64],
    interval: u64,
    seed: u64,
) -> Vec<f64> {
    let mut matroid = matroid_template.clone();
    matroid
        .set_thresholds(thresholds_at(levels[0], matroid_template))
        .expect("levels map to valid thresholds");
    let mut pomc = Pomc::new(MaxCut::new(graph.clone()), matroid, seed)
        .expect("objective and matroid sizes match");
    let mut values = Vec::with_capacity(levels.len());
    for (j, &level) in levels.iter().enumerate() {
        if j > 0 {
            pomc.on_change(thresholds_at(level, matroid_template))
                .expect("levels map to valid thresholds");
        }
        pomc.run(interval);
        values.push(pomc.best().raw_value);
    }
    values
}

/// Run the full dynamic max-cut experiment described by `cfg` and write
/// `records.jsonl`, `table.csv`, and `metadata.txt` into `output_dir`.
///
/// The instance (graph + partition) comes from `graph_seed`, the threshold
/// levels from `schedule_seed` (or the explicit levels), and replication
/// `r` of every interval setting uses run seed `run_seed_base + r`.
/// Replications run in parallel; everything else is a deterministic serial
/// reduce, so identical configs give byte-identical outputs.
pub fn run_dynamic_experiment(
    cfg: &ExperimentConfig,
    output_dir: &Path,
) -> Result<DynamicArtifacts> {
    cfg.validate()?;
    let levels = cfg.levels();
    if let Some(explicit) = &cfg.schedule_levels {
        debug_assert_eq!(explicit.len(), levels.len());
    }
    let m_changes = levels.len();

    // Instance: graph first, then the partition shuffle, from one stream.
    let mut instance_rng = ChaCha8Rng::seed_from_u64(cfg.graph_seed);
    let graph = WeightedGraph::generate(cfg.n, cfg.density, &mut instance_rng)?;
    let matroid_template =
        PartitionMatroid::random_equal(cfg.n, cfg.k, vec![1; cfg.k], &mut instance_rng)?;

    // Greedy restart at every change, unbounded evaluations.
    let greedy_values: Vec<f64> = levels
        .iter()
        .map(|&b| {
            let mut matroid = matroid_template.clone();
            matroid
                .set_thresholds(thresholds_at(b, &matroid_template))
                .expect("levels map to valid thresholds");
            let mut oracle = CountingOracle::new(MaxCut::new(graph.clone()));
            greedy_solve(&mut oracle, &matroid, cfg.greedy_stop).1
        })
        .collect();

    // POMC replications, isolated per (interval, repetition).
    let jobs: Vec<(u64, u64)> = cfg
        .intervals
        .iter()
        .flat_map(|&interval| {
            (0..cfg.repetitions).map(move |r| (interval, cfg.run_seed_base + r as u64))
        })
        .collect();
    let trajectories: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(interval, seed)| {
            pomc_trajectory(&graph, &matroid_template, &levels, interval, seed)
        })
        .collect();

    let mut records = Vec::with_capacity(cfg.intervals.len() * m_changes);
    for (ii, &interval) in cfg.intervals.iter().enumerate() {
        for j in 0..m_changes {
            let pomc_values: Vec<f64> = (0..cfg.repetitions)
                .map(|r| trajectories[ii * cfg.repetitions + r][j])
                .collect();
            records.push(ChangeRecord {
                change_index: j + 1,
                interval,
                level: levels[j],
                greedy_value: greedy_values[j],
                pomc_values,
            });
        }
    }

    let rows = aggregate_batches(&records, cfg.batch_size, ALPHA);
    let table_csv = table_to_csv(cfg.k, cfg.density, &rows, &cfg.comment());
    let jsonl = records_to_jsonl(&RunMeta::from_config(cfg), &records);
    let metadata = cfg.to_metadata();

    fs::create_dir_all(output_dir).map_err(|e| Error::io(output_dir, e))?;
    let records_path = output_dir.join("records.jsonl");
    let table_path = output_dir.join("table.csv");
    let metadata_path = output_dir.join("metadata.txt");
    let write_all = || -> Result<()> {
        fs::write(&records_path, &jsonl).map_err(|e| Error::io(&records_path, e))?;
        fs::write(&table_path, &table_csv).map_err(|e| Error::io(&table_path, e))?;
        fs::write(&metadata_path, &metadata).map_err(|e| Error::io(&metadata_path, e))?;
        Ok(())
    };
    if let Err(e) = write_all() {
        // Remove partial outputs; the directory may hold other runs.
        let _ = fs::remove_file(&records_path);
        let _ = fs::remove_file(&table_path);
        let _ = fs::remove_file(&metadata_path);
        return Err(e);
    }

    Ok(DynamicArtifacts {
        records,
        table_csv,
        records_path,
        table_path,
        metadata_path,
    })
}

/// Objective family for theorem-verification runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoryObjective {
    /// Random non-negative weights: monotone and modular.
    Modular,
    /// Random coverage sets: monotone and submodular.
    Coverage,
    /// Random-graph cut: submodular, not monotone.
    MaxCut { density: f64 },
}

impl TheoryObjective {
    /// Guarantee families that legitimately apply to this objective.
    pub fn kinds(&self) -> Vec<GuaranteeKind> {
        match self {
            TheoryObjective::Modular | TheoryObjective::Coverage => {
                vec![GuaranteeKind::Submodular, GuaranteeKind::Monotone]
            }
            TheoryObjective::MaxCut { .. } => vec![GuaranteeKind::Submodular],
        }
    }
}

/// Configuration of a theorem-verification run on a brute-forceable
/// instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoryCheckConfig {
    pub objective: TheoryObjective,
    pub n: usize,
    pub k: usize,
    pub thresholds: Vec<usize>,
    /// Post-change thresholds; when present the adaptation bound
    /// (Theorem 2 / Theorem 4 family) is checked after the change.
    pub thresholds_star: Option<Vec<usize>>,
    pub instance_seed: u64,
    pub run_seed_base: u64,
    pub runs: usize,
    /// Budget multiplier on the expected-time bounds (10 turns the
    /// expectation into a >= 90% per-run success probability).
    pub multiplier: f64,
}

/// Static-phase result for one guarantee family.
#[derive(Clone, Debug, Serialize)]
pub struct StaticCheck {
    pub kind: GuaranteeKind,
    pub report: GuaranteeReport,
}

/// Adaptation-phase result for one guarantee family.
#[derive(Clone, Debug, Serialize)]
pub struct AdaptationCheck {
    pub kind: GuaranteeKind,
    pub best_value: f64,
    pub bound: f64,
    pub pass: bool,
}

/// All checks for one run seed.
#[derive(Clone, Debug, Serialize)]
pub struct SeedReport {
    pub seed: u64,
    pub static_evaluations: u64,
    pub static_checks: Vec<StaticCheck>,
    pub adaptation_evaluations: Option<u64>,
    pub adaptation_checks: Option<Vec<AdaptationCheck>>,
    pub pass: bool,
}

/// Full theorem-verification report.
#[derive(Clone, Debug, Serialize)]
pub struct TheoryCheckReport {
    pub config: TheoryCheckConfig,
    pub params: InstanceParams,
    pub seeds: Vec<SeedReport>,
    pub passes: usize,
    pub runs: usize,
}

impl TheoryCheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn run_theory_check_on<F>(cfg: &TheoryCheckConfig, function: F) -> Result<TheoryCheckReport>
where
    F: SetFunction + Clone + Send + Sync,
{
    // The objective was built from the instance_seed stream; the partition
    // comes from its own stream so it does not depend on how many draws the
    // objective family consumed.
    let mut partition_rng = ChaCha8Rng::seed_from_u64(cfg.instance_seed.wrapping_add(1));
    let matroid = PartitionMatroid::random_equal(
        cfg.n,
        cfg.k,
        cfg.thresholds.clone(),
        &mut partition_rng,
    )?;
    if let Some(star) = &cfg.thresholds_star {
        let mut probe = matroid.clone();
        probe.set_thresholds(star.clone())?;
    }

    let kinds = cfg.objective.kinds();
    let params = InstanceParams::compute(
        &function,
        &matroid,
        cfg.thresholds_star.as_deref(),
        &kinds,
    )?;

    let static_budget = static_run_budget(cfg.n, params.d, params.d_bar, cfg.multiplier);
    let adapt_budget = params.d_bar_star.map(|d_bar_star| {
        adaptation_run_budget(
            cfg.n,
            params.d_star.unwrap(),
            params.d_bar,
            d_bar_star,
            cfg.multiplier,
        )
    });

    let seeds: Vec<SeedReport> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| {
            let seed = cfg.run_seed_base + r as u64;
            let mut pomc = Pomc::new(function.clone(), matroid.clone(), seed)
                .expect("objective and matroid sizes match");
            pomc.run(static_budget);
            let static_checks: Vec<StaticCheck> = kinds
                .iter()
                .map(|&kind| StaticCheck {
                    kind,
                    report: check_population_guarantee(pomc.population(), kind, &params),
                })
                .collect();
            let static_evaluations = pomc.evaluations();

            let (adaptation_evaluations, adaptation_checks) = match &cfg.thresholds_star {
                Some(star) => {
                    pomc.on_change(star.clone()).expect("validated above");
                    let budget = adapt_budget.expect("star params computed");
                    pomc.run(budget);
                    let checks: Vec<AdaptationCheck> = kinds
                        .iter()
                        .map(|&kind| {
                            let bound = params.adaptation_bound(kind);
                            let best_value = pomc.best().raw_value;
                            AdaptationCheck {
                                kind,
                                best_value,
                                bound,
                                pass: best_value
                                    >= bound - crate::metrics::BOUND_TOL * bound.abs().max(1.0),
                            }
                        })
                        .collect();
                    (Some(pomc.evaluations() - static_evaluations), Some(checks))
                }
                None => (None, None),
            };

            let pass = static_checks.iter().all(|c| c.report.pass)
                && adaptation_checks
                    .as_ref()
                    .map_or(true, |cs| cs.iter().all(|c| c.pass));
            SeedReport {
                seed,
                static_evaluations,
                static_checks,
                adaptation_evaluations,
                adaptation_checks,
                pass,
            }
        })
        .collect();

    let passes = seeds.iter().filter(|s| s.pass).count();
    Ok(TheoryCheckReport {
        config: cfg.clone(),
        params,
        seeds,
        passes,
        runs: cfg.runs,
    })
}

/// Build the instance named by the config and verify the population
/// guarantees: run for `multiplier * e * d̄ * n * (d+1)` evaluations and
/// check every per-size bound; if post-change thresholds are given, apply
/// the change, run `multiplier * e * (d̄*-d̄) * n * (d*+1)` further
/// evaluations, and check the adaptation bound. Brute-force guards apply.
pub fn run_theory_check(cfg: &TheoryCheckConfig) -> Result<TheoryCheckReport> {
    if cfg.runs == 0 {
        return Err(Error::InvalidConfig("runs must be positive".into()));
    }
    if cfg.multiplier <= 0.0 {
        return Err(Error::InvalidConfig("multiplier must be positive".into()));
    }
    use rand::Rng;
    let mut objective_rng = ChaCha8Rng::seed_from_u64(cfg.instance_seed);
    match cfg.objective {
        TheoryObjective::Modular => {
            let weights = (0..cfg.n).map(|_| objective_rng.random::<f64>()).collect();
            run_theory_check_on(cfg, Modular::new(weights))
        }
        TheoryObjective::Coverage => {
            let universe = (2 * cfg.n).min(64) as u32;
            let f = Coverage::random(cfg.n, universe, 0.3, &mut objective_rng);
            run_theory_check_on(cfg, f)
        }
        TheoryObjective::MaxCut { density } => {
            let g = WeightedGraph::generate(cfg.n, density, &mut objective_rng)?;
            run_theory_check_on(cfg, MaxCut::new(g))
        }
    }
}
