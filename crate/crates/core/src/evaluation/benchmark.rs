use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::{summarize, EvalError, Summary};
use crate::clock::Stopwatch;
use crate::dataset::load_heatmap;
use crate::gridworld::{GridMap, PlanningQuery};
use crate::planners::{plan, PlanResult, PlannerConfig, PlannerMode};
use crate::sampling::{derive_seed, seeded_rng, trial_seed, Heatmap, SamplerConfig};

/// Where a heatmap-guided planner gets its heatmap.
#[derive(Clone, Debug, PartialEq)]
pub enum HeatmapSource {
    /// The case's ground-truth heatmap.
    Oracle,
    /// `{dir}/{map_id}_heat.png`, read fresh for every run.
    Model { dir: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlannerSpec {
    pub name: String,
    pub config: PlannerConfig,
    pub sampler: SamplerConfig,
    /// Ignored unless `config.mode` uses a heatmap.
    pub heatmap: HeatmapSource,
}

impl PlannerSpec {
    /// A planner named after its mode, with oracle heatmaps where relevant.
    pub fn new(mode: PlannerMode, max_iterations: usize) -> Self {
        Self {
            name: mode.as_str().to_string(),
            config: PlannerConfig::new(mode, max_iterations),
            sampler: SamplerConfig::default(),
            heatmap: HeatmapSource::Oracle,
        }
    }
}

/// One map of a benchmark.
#[derive(Clone, Debug)]
pub struct BenchmarkCase {
    pub id: String,
    pub map: GridMap,
    pub query: PlanningQuery,
    pub ground_truth: Option<Heatmap>,
}

/// One (map, planner, seed) run.
///
/// `node_count` is the tree size when the first solution appeared, or the
/// final tree size for unsolved runs. `optimal_len` is the best length at
/// budget exhaustion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub map_id: String,
    pub planner: String,
    pub seed: u64,
    pub time_cost_s: f64,
    pub node_count: usize,
    pub initial_len: Option<f64>,
    pub optimal_len: Option<f64>,
}

impl BenchmarkRecord {
    pub fn solved(&self) -> bool {
        self.initial_len.is_some()
    }

    /// Key used for row ordering.
    pub fn key(&self) -> (&str, &str, u64) {
        (&self.map_id, &self.planner, self.seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellError {
    pub map_id: String,
    pub planner: String,
    pub seed: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkOutcome {
    pub records: Vec<BenchmarkRecord>,
    pub errors: Vec<CellError>,
    pub summary: Summary,
}

/// Runs every (case, planner, trial) cell. Trial `t` uses seed
/// `base_seed ^ t` for every planner so runs pair up across planners.
pub fn run_benchmark(
    cases: &[BenchmarkCase],
    planners: &[PlannerSpec],
    trials: usize,
    base_seed: u64,
    jobs: usize,
) -> Result<BenchmarkOutcome, EvalError> {
    if cases.is_empty() {
        return Err(EvalError::EmptyInput("map"));
    }
    if planners.is_empty() {
        return Err(EvalError::EmptyInput("planner"));
    }
    if trials == 0 {
        return Err(EvalError::EmptyInput("trial"));
    }
    for spec in planners {
        spec.config.validate()?;
        spec.sampler.validate()?;
    }
    let per_case = planners.len() * trials;
    let cells = crate::par::map_indexed(cases.len() * per_case, jobs, |i| {
        let case = &cases[i / per_case];
        let spec = &planners[(i % per_case) / trials];
        let seed = trial_seed(base_seed, (i % trials) as u64);
        run_cell(case, spec, seed).map_err(|e| CellError {
            map_id: case.id.clone(),
            planner: spec.name.clone(),
            seed,
            message: e,
        })
    });
    let (mut records, mut errors) = (Vec::new(), Vec::new());
    for cell in cells {
        match cell {
            Ok(r) => records.push(r),
            Err(e) => {
                log::warn!("{} / {} / seed {}: {}", e.map_id, e.planner, e.seed, e.message);
                errors.push(e);
            }
        }
    }
    records.sort_by(|a, b| a.key().cmp(&b.key()));
    let summary = summarize(&records);
    Ok(BenchmarkOutcome {
        records,
        errors,
        summary,
    })
}

fn run_cell(case: &BenchmarkCase, spec: &PlannerSpec, seed: u64) -> Result<BenchmarkRecord, String> {
    let clock = Stopwatch::start();
    let loaded;
    let heatmap = if spec.config.mode.uses_heatmap() {
        match &spec.heatmap {
            HeatmapSource::Oracle => Some(
                case.ground_truth
                    .as_ref()
                    .ok_or_else(|| format!("map {} has no ground-truth heatmap", case.id))?,
            ),
            HeatmapSource::Model { dir } => {
                let path = dir.join(format!("{}_heat.png", case.id));
                let bytes =
                    std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                loaded = load_heatmap(&bytes, &case.map).map_err(|e| e.to_string())?;
                Some(&loaded)
            }
        }
    } else {
        None
    };
    let sampler = SamplerConfig {
        rng_seed: derive_seed(seed, spec.sampler.rng_seed),
        ..spec.sampler
    };
    let result: PlanResult = plan(
        &case.map,
        &case.query,
        &spec.config,
        &sampler,
        heatmap,
        &mut seeded_rng(seed),
    )
    .map_err(|e| e.to_string())?;
    Ok(BenchmarkRecord {
        map_id: case.id.clone(),
        planner: spec.name.clone(),
        seed,
        time_cost_s: clock.elapsed_secs(),
        node_count: result.nodes_at_first_solution.unwrap_or(result.tree.len()),
        initial_len: result.initial_path.as_ref().map(|p| p.length),
        optimal_len: result.best_path.as_ref().map(|p| p.length),
    })
}
