//! Sampling-based path planning on occupancy grids.
//!
//! The crate covers the world model ([`gridworld`]), uniform and
//! heatmap-driven sampling ([`sampling`]), RRT / RRT* / heatmap-guided RRT*
//! ([`planners`]), ground-truth heatmap datasets ([`dataset`]), connectivity
//! checks and benchmarks ([`evaluation`]) and PNG rendering ([`render`]).
//!
//! ```
//! use heatmap_rrt::gridworld::{GridMap, PlanningQuery, WorldPoint};
//! use heatmap_rrt::planners::{plan, PlannerConfig, PlannerMode};
//! use heatmap_rrt::sampling::{seeded_rng, SamplerConfig};
//!
//! let map = GridMap::empty(64, 64).unwrap();
//! let query =
//!     PlanningQuery::new(&map, WorldPoint::new(5.0, 5.0), WorldPoint::new(58.0, 58.0), 4.0).unwrap();
//! let cfg = PlannerConfig::new(PlannerMode::RrtStar, 2000);
//! let result = plan(&map, &query, &cfg, &SamplerConfig::default(), None, &mut seeded_rng(7)).unwrap();
//! assert!(result.best_path.unwrap().length >= 74.95 - 4.0);
//! ```

#[cfg(feature = "cli")]
pub mod cli;
mod clock;
pub mod dataset;
pub mod evaluation;
pub mod gridworld;
mod par;
pub mod planners;
pub mod render;
pub mod sampling;
