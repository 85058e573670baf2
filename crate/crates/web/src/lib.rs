//! WebAssembly bindings for the browser demo.
//!
//! A [`Demo`] holds one generated map with its query. The page calls
//! [`Demo::ground_truth`] to build a heatmap from repeated RRT runs, then
//! [`Demo::compare`] to run uniform and heatmap-guided RRT* side by side.
//! Images cross the boundary as RGBA byte buffers sized `size * size * 4`.

use heatmap_rrt::dataset::{ground_truth_heatmap, sample_query};
use heatmap_rrt::gridworld::{generate_random_map, GridMap, MapKind, PlanningQuery};
use heatmap_rrt::planners::{cgan_rrt_star_plan, rrt_star_plan, PlanResult, PlannerConfig, PlannerMode};
use heatmap_rrt::render::{render_heatmap_overlay, render_plan_rgb};
use heatmap_rrt::sampling::{derive_seed, seeded_rng, Heatmap, SamplerConfig, UniformSampler};
use image::RgbImage;
use wasm_bindgen::prelude::*;

fn to_rgba(img: &RgbImage) -> Vec<u8> {
    img.pixels().flat_map(|p| [p[0], p[1], p[2], 255]).collect()
}

fn js_err(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
pub struct Demo {
    map: GridMap,
    query: PlanningQuery,
    heatmap: Option<Heatmap>,
}

impl Demo {
    /// Generates a `size` x `size` map of `kind` (blocks, gaps or clutter)
    /// with a random long-range query.
    pub fn try_new(kind: &str, size: usize, seed: u32) -> Result<Demo, String> {
        let kind: MapKind = kind.parse().map_err(|e| format!("{e}"))?;
        let map = generate_random_map(kind, size, size, seed as u64).map_err(|e| e.to_string())?;
        let query = sample_query(&map, 4.0, &mut seeded_rng(derive_seed(seed as u64, 1)))
            .map_err(|e| e.to_string())?;
        Ok(Demo { map, query, heatmap: None })
    }

    /// Overlays `k` RRT solutions into a heatmap and returns its rendering.
    pub fn try_ground_truth(&mut self, k: usize, seed: u32) -> Result<Vec<u8>, String> {
        let gt = ground_truth_heatmap(&self.map, &self.query, k, 20_000, seed as u64)
            .map_err(|e| e.to_string())?;
        let img = render_heatmap_overlay(&self.map, Some(&self.query), &gt.heatmap);
        self.heatmap = Some(gt.heatmap);
        Ok(to_rgba(&img))
    }

    /// Runs uniform and guided RRT* with the same seed and budget.
    pub fn try_compare(&self, iterations: usize, seed: u32) -> Result<Comparison, String> {
        let heatmap = self
            .heatmap
            .as_ref()
            .ok_or("build the ground-truth heatmap first")?;
        let uniform = rrt_star_plan(
            &self.map,
            &self.query,
            &PlannerConfig::new(PlannerMode::RrtStar, iterations),
            &mut UniformSampler,
            &mut seeded_rng(seed as u64),
        )
        .map_err(|e| e.to_string())?;
        let guided = cgan_rrt_star_plan(
            &self.map,
            &self.query,
            &PlannerConfig::new(PlannerMode::HeatmapRrtStar, iterations),
            &SamplerConfig { mix_probability: 0.5, rng_seed: seed as u64 },
            heatmap,
            &mut seeded_rng(seed as u64),
        )
        .map_err(|e| e.to_string())?;
        Ok(Comparison {
            uniform: self.run_view(&uniform),
            guided: self.run_view(&guided),
        })
    }

    fn run_view(&self, r: &PlanResult) -> RunView {
        let path = r.best_path.as_ref().map(|p| p.waypoints.as_slice());
        RunView {
            rgba: to_rgba(&render_plan_rgb(&self.map, Some(&self.query), Some(&r.tree), path)),
            nodes_at_first_solution: r.nodes_at_first_solution.map_or(-1.0, |n| n as f64),
            initial_length: r.initial_path.as_ref().map_or(-1.0, |p| p.length),
            best_length: r.best_path.as_ref().map_or(-1.0, |p| p.length),
            tree_size: r.tree.len(),
        }
    }
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(kind: &str, size: usize, seed: u32) -> Result<Demo, JsError> {
        Demo::try_new(kind, size, seed).map_err(js_err)
    }

    pub fn size(&self) -> usize {
        self.map.width()
    }

    pub fn map_rgba(&self) -> Vec<u8> {
        to_rgba(&render_plan_rgb(&self.map, Some(&self.query), None, None))
    }

    pub fn ground_truth(&mut self, k: usize, seed: u32) -> Result<Vec<u8>, JsError> {
        self.try_ground_truth(k, seed).map_err(js_err)
    }

    pub fn compare(&self, iterations: usize, seed: u32) -> Result<Comparison, JsError> {
        self.try_compare(iterations, seed).map_err(js_err)
    }
}

/// One planner run: its rendering and metrics. Missing values are -1.
#[wasm_bindgen(getter_with_clone)]
#[derive(Clone)]
pub struct RunView {
    pub rgba: Vec<u8>,
    pub nodes_at_first_solution: f64,
    pub initial_length: f64,
    pub best_length: f64,
    pub tree_size: usize,
}

#[wasm_bindgen(getter_with_clone)]
pub struct Comparison {
    pub uniform: RunView,
    pub guided: RunView,
}
