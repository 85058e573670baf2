//! RRT, RRT* and heatmap-guided RRT* over a [`GridMap`].
//!
//! All three share [`Tree`], [`steer`] and the map's segment check. RRT stops
//! at its first solution; the RRT* variants spend the whole iteration budget
//! and report both the first and the best goal-reaching path. The guided
//! variant differs from RRT* only in where `x_rand` comes from.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gridworld::{GridError, GridMap, PlanningQuery, WorldPoint, DEFAULT_COLLISION_SPACING};
use crate::sampling::{
    build_distribution, Heatmap, HybridSampler, SamplerConfig, SamplingError, UniformSampler,
};

mod rrt;
mod rrt_star;
mod tree;

pub use rrt::rrt_plan;
pub use rrt_star::{cgan_rrt_star_plan, rrt_star_plan, rrt_star_plan_observed, IterationView};
pub use tree::{steer, Tree, Vertex};

pub const DEFAULT_STEP_SIZE: f64 = 6.0;
pub const DEFAULT_REWIRE_RADIUS: f64 = 12.0;
pub const DEFAULT_MAX_ITERATIONS: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("invalid planner config: {0}")]
    Config(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlannerMode {
    Rrt,
    RrtStar,
    HeatmapRrtStar,
}

impl PlannerMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PlannerMode::Rrt => "rrt",
            PlannerMode::RrtStar => "rrt_star",
            PlannerMode::HeatmapRrtStar => "heatmap_rrt_star",
        }
    }

    pub fn uses_heatmap(self) -> bool {
        self == PlannerMode::HeatmapRrtStar
    }
}

impl fmt::Display for PlannerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlannerMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rrt" => Ok(PlannerMode::Rrt),
            "rrt_star" => Ok(PlannerMode::RrtStar),
            "heatmap_rrt_star" | "cgan_rrt_star" => Ok(PlannerMode::HeatmapRrtStar),
            other => Err(format!(
                "unknown planner mode `{other}` (expected rrt, rrt_star or heatmap_rrt_star)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannerConfig {
    pub step_size: f64,
    pub max_iterations: usize,
    pub rewire_radius: f64,
    pub collision_spacing: f64,
    pub mode: PlannerMode,
    /// Use the exact cell-traversal test instead of sampling at `collision_spacing`.
    #[serde(default)]
    pub exact_collision: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            step_size: DEFAULT_STEP_SIZE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            rewire_radius: DEFAULT_REWIRE_RADIUS,
            collision_spacing: DEFAULT_COLLISION_SPACING,
            mode: PlannerMode::RrtStar,
            exact_collision: false,
        }
    }
}

impl PlannerConfig {
    pub fn new(mode: PlannerMode, max_iterations: usize) -> Self {
        Self {
            mode,
            max_iterations,
            ..Self::default()
        }
    }

    /// Collision test for one edge under this configuration.
    pub fn segment_free(
        &self,
        map: &GridMap,
        a: WorldPoint,
        b: WorldPoint,
    ) -> Result<bool, GridError> {
        if self.exact_collision {
            map.segment_obstacle_free_exact(a, b)
        } else {
            map.segment_obstacle_free_with_spacing(a, b, self.collision_spacing)
        }
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(PlanError::Config(format!(
                "step size must be positive, got {}",
                self.step_size
            )));
        }
        if !(self.rewire_radius >= self.step_size && self.rewire_radius.is_finite()) {
            return Err(PlanError::Config(format!(
                "rewire radius {} must be at least the step size {}",
                self.rewire_radius, self.step_size
            )));
        }
        if !(self.collision_spacing > 0.0 && self.collision_spacing.is_finite()) {
            return Err(PlanError::Config(format!(
                "collision spacing must be positive, got {}",
                self.collision_spacing
            )));
        }
        if self.max_iterations < 1 {
            return Err(PlanError::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Ordered waypoints with their total Euclidean length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub waypoints: Vec<WorldPoint>,
    pub length: f64,
}

impl Path {
    pub fn new(waypoints: Vec<WorldPoint>) -> Self {
        let length = polyline_length(&waypoints);
        Self { waypoints, length }
    }

    /// Checks the path against `query` on `map`: starts at the start state,
    /// ends inside the goal disk, every segment passes the collision check,
    /// and the stored length matches the waypoints.
    pub fn validate(
        &self,
        map: &GridMap,
        query: &PlanningQuery,
        spacing: f64,
    ) -> Result<(), String> {
        let first = self.waypoints.first().ok_or("path has no waypoints")?;
        if *first != query.start {
            return Err(format!("path starts at {first:?}, not {:?}", query.start));
        }
        let last = self.waypoints.last().unwrap();
        if !query.in_goal(*last) {
            return Err(format!(
                "path ends {} from the goal (radius {})",
                last.distance(query.goal),
                query.goal_radius
            ));
        }
        for (i, pair) in self.waypoints.windows(2).enumerate() {
            let free = map
                .segment_obstacle_free_with_spacing(pair[0], pair[1], spacing)
                .map_err(|e| e.to_string())?;
            if !free {
                return Err(format!("segment {i} {:?} -> {:?} collides", pair[0], pair[1]));
            }
        }
        let recomputed = polyline_length(&self.waypoints);
        if (recomputed - self.length).abs() > 1e-9 * recomputed.max(1.0) {
            return Err(format!(
                "stored length {} differs from {recomputed}",
                self.length
            ));
        }
        let bound = query.start.distance(query.goal) - query.goal_radius;
        if self.length < bound - 1e-9 {
            return Err(format!("length {} below lower bound {bound}", self.length));
        }
        Ok(())
    }
}

pub fn polyline_length(points: &[WorldPoint]) -> f64 {
    points.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// Everything one planner run produces.
#[derive(Clone, Debug)]
pub struct PlanResult {
    pub tree: Tree,
    pub initial_path: Option<Path>,
    pub best_path: Option<Path>,
    pub iterations_used: usize,
    /// Tree size when the first solution appeared.
    pub nodes_at_first_solution: Option<usize>,
    /// Seconds spent planning (and building the sampling distribution, for
    /// the guided planner).
    pub wall_time: f64,
}

impl PlanResult {
    pub fn solved(&self) -> bool {
        self.best_path.is_some()
    }

    /// Serializable summary of the run.
    pub fn report(&self, map_id: &str, mode: PlannerMode, seed: u64) -> PlanReport {
        PlanReport {
            map_id: map_id.to_string(),
            mode,
            seed,
            iterations: self.iterations_used,
            nodes_at_first_solution: self.nodes_at_first_solution,
            wall_time_s: self.wall_time,
            initial_length: self.initial_path.as_ref().map(|p| p.length),
            best_length: self.best_path.as_ref().map(|p| p.length),
            waypoints: self
                .best_path
                .as_ref()
                .map(|p| p.waypoints.clone())
                .unwrap_or_default(),
        }
    }
}

/// JSON form of a [`PlanResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub map_id: String,
    pub mode: PlannerMode,
    pub seed: u64,
    pub iterations: usize,
    pub nodes_at_first_solution: Option<usize>,
    pub wall_time_s: f64,
    pub initial_length: Option<f64>,
    pub best_length: Option<f64>,
    pub waypoints: Vec<WorldPoint>,
}

/// Runs the planner selected by `cfg.mode`.
///
/// `heatmap` is required for [`PlannerMode::HeatmapRrtStar`] and ignored
/// otherwise.
pub fn plan<R: Rng + ?Sized>(
    map: &GridMap,
    query: &PlanningQuery,
    cfg: &PlannerConfig,
    sampler_cfg: &SamplerConfig,
    heatmap: Option<&Heatmap>,
    rng: &mut R,
) -> Result<PlanResult, PlanError> {
    match cfg.mode {
        PlannerMode::Rrt => rrt_plan(map, query, cfg, &mut UniformSampler, rng),
        PlannerMode::RrtStar => rrt_star_plan(map, query, cfg, &mut UniformSampler, rng),
        PlannerMode::HeatmapRrtStar => {
            let heatmap = heatmap.ok_or_else(|| {
                PlanError::Config("heatmap_rrt_star needs a heatmap".into())
            })?;
            cgan_rrt_star_plan(map, query, cfg, sampler_cfg, heatmap, rng)
        }
    }
}

/// Builds the guided sampler for `heatmap`; exposed for callers that time
/// distribution construction separately.
pub fn guided_sampler<'a>(
    dist: &'a crate::sampling::SamplingDistribution,
    sampler_cfg: &SamplerConfig,
) -> Result<HybridSampler<'a>, PlanError> {
    Ok(HybridSampler::new(dist, sampler_cfg)?)
}

pub(crate) fn distribution_for(
    heatmap: &Heatmap,
    map: &GridMap,
) -> Result<crate::sampling::SamplingDistribution, PlanError> {
    Ok(build_distribution(heatmap, map)?)
}
