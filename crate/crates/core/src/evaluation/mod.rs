//! Heatmap connectivity checks and planner benchmarks.

use serde::{Deserialize, Serialize};

use crate::dataset::DatasetError;
use crate::gridworld::{disk_cells, GridError, GridMap, MapKind, PlanningQuery};
use crate::planners::{rrt_plan, Path, PlanError, PlannerConfig, PlannerMode};
use crate::sampling::{seeded_rng, Heatmap, SamplingError, UniformSampler};

mod benchmark;
mod report;
pub mod stats;

pub use benchmark::{
    run_benchmark, BenchmarkCase, BenchmarkOutcome, BenchmarkRecord, CellError, HeatmapSource,
    PlannerSpec,
};
pub use report::{
    emit_report, parse_csv, summarize, summarize_pair, CellSummary, PairedSummary, ReportFormat, Summary,
    CSV_HEADER,
};

/// Default RRT iteration budget inside a restricted map.
pub const DEFAULT_CONNECTIVITY_BUDGET: usize = 5000;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("unknown report format `{0}` (expected csv or json)")]
    UnknownFormat(String),
    #[error("benchmark needs at least one {0}")]
    EmptyInput(&'static str),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityVerdict {
    pub pair_id: String,
    pub success: bool,
    pub rrt_iterations_used: usize,
    pub restricted_free_fraction: f64,
    /// The path that certified success, valid on the restricted map.
    pub path: Option<Path>,
}

/// Free space allowed by a heatmap: its positive-weight support plus the
/// start and goal disks, intersected with the map's own free cells.
///
/// Returns `None` when nothing is left free.
pub fn restricted_map(map: &GridMap, query: &PlanningQuery, heatmap: &Heatmap) -> Option<GridMap> {
    let (w, h) = (map.width(), map.height());
    let mut allowed = heatmap.support();
    for center in [query.start, query.goal] {
        for (x, y) in disk_cells(w, h, center) {
            allowed[y * w + x] = true;
        }
    }
    let occupied: Vec<bool> = allowed
        .iter()
        .zip(map.cells())
        .map(|(&a, &obstacle)| obstacle || !a)
        .collect();
    GridMap::from_cells(w, h, occupied, MapKind::Custom, map.seed()).ok()
}

/// Plans with RRT inside [`restricted_map`]; success means a path was found.
pub fn connectivity_test(
    pair_id: &str,
    map: &GridMap,
    query: &PlanningQuery,
    heatmap: &Heatmap,
    budget: usize,
    seed: u64,
) -> Result<ConnectivityVerdict, EvalError> {
    heatmap.check_dims(map)?;
    let failed = |fraction: f64, iterations: usize| ConnectivityVerdict {
        pair_id: pair_id.to_string(),
        success: false,
        rrt_iterations_used: iterations,
        restricted_free_fraction: fraction,
        path: None,
    };
    let Some(restricted) = restricted_map(map, query, heatmap) else {
        return Ok(failed(0.0, 0));
    };
    let fraction = restricted.free_fraction();
    if query.validate(&restricted).is_err() {
        return Ok(failed(fraction, 0));
    }
    let cfg = PlannerConfig::new(PlannerMode::Rrt, budget);
    let result = rrt_plan(&restricted, query, &cfg, &mut UniformSampler, &mut seeded_rng(seed))?;
    Ok(ConnectivityVerdict {
        pair_id: pair_id.to_string(),
        success: result.best_path.is_some(),
        rrt_iterations_used: result.iterations_used,
        restricted_free_fraction: fraction,
        path: result.best_path,
    })
}
