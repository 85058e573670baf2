//! Training-corpus generation: random maps with long-range queries, and
//! ground-truth heatmaps made by overlaying many independent RRT solutions.

use std::collections::VecDeque;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use image::{DynamicImage, RgbImage};
use log::{debug, info, warn};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gridworld::{
    disk_cells, encode_rgb_png, generate_random_map, paint_disks,
    render_map_rgb, GridError, GridMap, MapKind, MapMeta, PlanningQuery, WorldPoint,
    COLOR_PATH_REGION, DEFAULT_DIM, DISK_RADIUS, DEFAULT_GOAL_RADIUS,
};
use crate::planners::{rrt_plan, Path, PlanError, PlannerConfig, PlannerMode};
use crate::sampling::{derive_seed, seeded_rng, Heatmap, HeatmapMeta, SamplingError, UniformSampler};

/// RRT solutions overlaid per ground-truth heatmap.
pub const DEFAULT_PATHS_PER_MAP: usize = 50;
/// Iteration budget of each ground-truth RRT run.
pub const DEFAULT_RRT_BUDGET: usize = 20_000;
/// Width of a rasterized path stroke, in cells.
pub const STROKE_WIDTH: f64 = 3.0;
/// Filtered green intensities below this are treated as noise.
pub const NOISE_FLOOR: u8 = 64;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("no RRT run found a path; pair rejected")]
    EmptyGroundTruth,
    #[error("could not place a query: {0}")]
    NoQuery(String),
    #[error("image has no path-region pixels")]
    EmptyImage,
    #[error("image is {got_w}x{got_h}, expected {want_w}x{want_h}")]
    ImageSize {
        got_w: u32,
        got_h: u32,
        want_w: u32,
        want_h: u32,
    },
    #[error("pair {index} still unsolvable after {attempts} attempts")]
    Exhausted { index: usize, attempts: usize },
    #[error("invalid dataset options: {0}")]
    Options(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One map, its query and the ground-truth heatmap.
#[derive(Clone, Debug)]
pub struct DatasetPair {
    pub map: GridMap,
    pub query: PlanningQuery,
    pub ground_truth: Heatmap,
    pub num_paths_found: usize,
}

/// Output of [`ground_truth_heatmap`].
#[derive(Clone, Debug)]
pub struct GroundTruth {
    pub heatmap: Heatmap,
    pub num_paths_found: usize,
    /// Free cells covered by each successful path's stroke.
    pub path_pixel_counts: Vec<usize>,
}

/// Places start and goal on free cell centers such that both annotation
/// disks lie entirely on free cells inside the map and the two are at least
/// half the smaller map side apart.
pub fn sample_query<R: Rng + ?Sized>(
    map: &GridMap,
    goal_radius: f64,
    rng: &mut R,
) -> Result<PlanningQuery, DatasetError> {
    let min_sep = 0.5 * map.width().min(map.height()) as f64;
    let r = DISK_RADIUS;
    let clear = |p: WorldPoint| {
        p.x - r >= 0.0
            && p.y - r >= 0.0
            && p.x + r <= map.width() as f64
            && p.y + r <= map.height() as f64
            && disk_cells(map.width(), map.height(), p)
                .iter()
                .all(|&(x, y)| map.cell_is_free(x, y))
    };
    let pick = |rng: &mut R| {
        for _ in 0..10_000 {
            let cx = rng.gen_range(0..map.width());
            let cy = rng.gen_range(0..map.height());
            let p = WorldPoint::cell_center(cx, cy);
            if map.cell_is_free(cx, cy) && clear(p) {
                return Some(p);
            }
        }
        None
    };
    for _ in 0..1000 {
        let Some(start) = pick(rng) else { break };
        let Some(goal) = pick(rng) else { break };
        if start.distance(goal) >= min_sep {
            return Ok(PlanningQuery::new(map, start, goal, goal_radius)?);
        }
    }
    Err(DatasetError::NoQuery(format!(
        "no clear start/goal pair {min_sep} apart"
    )))
}

/// Whether the goal cell is 4-connected to the start cell through free cells.
pub fn cells_connected(map: &GridMap, query: &PlanningQuery) -> bool {
    let (w, h) = (map.width(), map.height());
    let start = map.cell_of(query.start);
    let goal = map.cell_of(query.goal);
    let mut seen = vec![false; w * h];
    let mut queue = VecDeque::from([start]);
    seen[map.index(start.0, start.1)] = true;
    while let Some((x, y)) = queue.pop_front() {
        if (x, y) == goal {
            return true;
        }
        let neighbors = [
            (x.wrapping_sub(1), y),
            (x + 1, y),
            (x, y.wrapping_sub(1)),
            (x, y + 1),
        ];
        for (nx, ny) in neighbors {
            if nx < w && ny < h && map.cell_is_free(nx, ny) && !seen[map.index(nx, ny)] {
                seen[map.index(nx, ny)] = true;
                queue.push_back((nx, ny));
            }
        }
    }
    false
}

/// Free cells whose centers lie within half the stroke width of the polyline.
pub fn rasterize_path(map: &GridMap, waypoints: &[WorldPoint]) -> Vec<usize> {
    let half = STROKE_WIDTH / 2.0;
    let mut marked = vec![false; map.width() * map.height()];
    let segments: Vec<(WorldPoint, WorldPoint)> = if waypoints.len() == 1 {
        vec![(waypoints[0], waypoints[0])]
    } else {
        waypoints.windows(2).map(|w| (w[0], w[1])).collect()
    };
    for (a, b) in segments {
        let x0 = (a.x.min(b.x) - half).floor().max(0.0) as usize;
        let y0 = (a.y.min(b.y) - half).floor().max(0.0) as usize;
        let x1 = ((a.x.max(b.x) + half).ceil().max(0.0) as usize).min(map.width());
        let y1 = ((a.y.max(b.y) + half).ceil().max(0.0) as usize).min(map.height());
        for cy in y0..y1 {
            for cx in x0..x1 {
                let c = WorldPoint::cell_center(cx, cy);
                if point_segment_distance(c, a, b) <= half {
                    marked[map.index(cx, cy)] = true;
                }
            }
        }
    }
    marked
        .iter()
        .enumerate()
        .filter(|&(i, &m)| m && !map.cells()[i])
        .map(|(i, _)| i)
        .collect()
}

fn point_segment_distance(p: WorldPoint, a: WorldPoint, b: WorldPoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(WorldPoint::new(a.x + t * dx, a.y + t * dy))
}

/// Runs RRT `k` times (seeds `base_seed + 0 .. k-1`) and accumulates each
/// found path's stroke, one count per path per cell.
pub fn ground_truth_heatmap(
    map: &GridMap,
    query: &PlanningQuery,
    k: usize,
    budget: usize,
    base_seed: u64,
) -> Result<GroundTruth, DatasetError> {
    if k == 0 {
        return Err(DatasetError::Options("k must be at least 1".into()));
    }
    let cfg = PlannerConfig::new(PlannerMode::Rrt, budget);
    let mut acc = vec![0.0; map.width() * map.height()];
    let mut counts = Vec::new();
    for i in 0..k as u64 {
        let mut rng = seeded_rng(base_seed.wrapping_add(i));
        let result = rrt_plan(map, query, &cfg, &mut UniformSampler, &mut rng)?;
        if let Some(path) = result.best_path {
            let cells = rasterize_path(map, &path.waypoints);
            for &c in &cells {
                acc[c] += 1.0;
            }
            counts.push(cells.len());
        }
    }
    if counts.is_empty() {
        return Err(DatasetError::EmptyGroundTruth);
    }
    let heatmap = Heatmap::new(map.width(), map.height(), acc)
        .map_err(|_| DatasetError::EmptyGroundTruth)?;
    Ok(GroundTruth {
        heatmap,
        num_paths_found: counts.len(),
        path_pixel_counts: counts,
    })
}

/// Base map with the heatmap support painted green and the start/goal disks
/// on top.
pub fn render_ground_truth_rgb(
    map: &GridMap,
    query: &PlanningQuery,
    heatmap: &Heatmap,
) -> RgbImage {
    let mut img = render_map_rgb(map, None);
    for (i, &w) in heatmap.weights().iter().enumerate() {
        if w > 0.0 && !map.cells()[i] {
            let (x, y) = ((i % map.width()) as u32, (i / map.width()) as u32);
            img.put_pixel(x, y, COLOR_PATH_REGION);
        }
    }
    paint_disks(&mut img, map, query);
    img
}

/// PNG bytes of [`render_ground_truth_rgb`] for a pair.
pub fn render_ground_truth_image(pair: &DatasetPair) -> Result<Vec<u8>, DatasetError> {
    Ok(encode_rgb_png(&render_ground_truth_rgb(
        &pair.map,
        &pair.query,
        &pair.ground_truth,
    ))?)
}

/// Extracts a heatmap from an image.
///
/// Grayscale images are read as intensities. Color images go through the
/// green filter `G - max(R, B)`, with values below [`NOISE_FLOOR`] zeroed;
/// start/goal disk pixels fall out of the filter.
pub fn heatmap_from_image(img: &DynamicImage) -> Result<Heatmap, DatasetError> {
    let result = if img.color().has_color() {
        let rgb = img.to_rgb8();
        let weights = rgb
            .pixels()
            .map(|p| {
                let [r, g, b] = p.0;
                let v = g.saturating_sub(r.max(b));
                if v < NOISE_FLOOR {
                    0.0
                } else {
                    v as f64
                }
            })
            .collect();
        Heatmap::new(rgb.width() as usize, rgb.height() as usize, weights)
    } else {
        Heatmap::from_gray(&img.to_luma8())
    };
    result.map_err(|e| match e {
        SamplingError::EmptyDistribution => DatasetError::EmptyImage,
        other => other.into(),
    })
}

/// [`heatmap_from_image`] on encoded bytes, checked against the map size.
pub fn load_heatmap(bytes: &[u8], map: &GridMap) -> Result<Heatmap, DatasetError> {
    let img = image::load_from_memory(bytes).map_err(|e| GridError::Decode(e.to_string()))?;
    if img.width() as usize != map.width() || img.height() as usize != map.height() {
        return Err(DatasetError::ImageSize {
            got_w: img.width(),
            got_h: img.height(),
            want_w: map.width() as u32,
            want_h: map.height() as u32,
        });
    }
    heatmap_from_image(&img)
}

/// Corpus generation settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetOptions {
    pub n_pairs: usize,
    pub kinds: Vec<MapKind>,
    pub base_seed: u64,
    pub width: usize,
    pub height: usize,
    pub paths_per_map: usize,
    pub rrt_budget: usize,
    pub goal_radius: f64,
    /// Map/query resamples allowed per pair.
    pub max_attempts: usize,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        Self {
            n_pairs: 10,
            kinds: MapKind::GENERATED.to_vec(),
            base_seed: 0,
            width: DEFAULT_DIM,
            height: DEFAULT_DIM,
            paths_per_map: DEFAULT_PATHS_PER_MAP,
            rrt_budget: DEFAULT_RRT_BUDGET,
            goal_radius: DEFAULT_GOAL_RADIUS,
            max_attempts: 100,
        }
    }
}

impl DatasetOptions {
    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.n_pairs == 0 {
            return Err(DatasetError::Options("n_pairs must be at least 1".into()));
        }
        if self.kinds.is_empty() || self.kinds.iter().any(|k| !MapKind::GENERATED.contains(k)) {
            return Err(DatasetError::Options(
                "kinds must be a non-empty subset of blocks, gaps, clutter".into(),
            ));
        }
        if self.paths_per_map == 0 || self.rrt_budget == 0 || self.max_attempts == 0 {
            return Err(DatasetError::Options(
                "paths_per_map, rrt_budget and max_attempts must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A generated pair plus how it was derived.
#[derive(Clone, Debug)]
pub struct GeneratedPair {
    pub index: usize,
    pub pair: DatasetPair,
    pub attempts: usize,
    pub rrt_base_seed: u64,
}

/// Generates pair `index` deterministically from the options' base seed,
/// resampling map and query until the ground truth has at least one path.
pub fn generate_pair(opts: &DatasetOptions, index: usize) -> Result<GeneratedPair, DatasetError> {
    let kind = opts.kinds[index % opts.kinds.len()];
    let pair_seed = derive_seed(opts.base_seed, index as u64);
    for attempt in 0..opts.max_attempts {
        let seed = derive_seed(pair_seed, attempt as u64);
        let map = generate_random_map(kind, opts.width, opts.height, seed)?;
        let mut qrng = seeded_rng(derive_seed(seed, 1));
        let query = match sample_query(&map, opts.goal_radius, &mut qrng) {
            Ok(q) => q,
            Err(e) => {
                debug!("pair {index} attempt {attempt}: {e}");
                continue;
            }
        };
        if !cells_connected(&map, &query) {
            debug!("pair {index} attempt {attempt}: start and goal disconnected, resampling");
            continue;
        }
        let rrt_base_seed = derive_seed(seed, 2);
        match ground_truth_heatmap(&map, &query, opts.paths_per_map, opts.rrt_budget, rrt_base_seed)
        {
            Ok(gt) => {
                if attempt > 0 {
                    info!("pair {index} accepted after {} attempts", attempt + 1);
                }
                return Ok(GeneratedPair {
                    index,
                    pair: DatasetPair {
                        map,
                        query,
                        ground_truth: gt.heatmap,
                        num_paths_found: gt.num_paths_found,
                    },
                    attempts: attempt + 1,
                    rrt_base_seed,
                });
            }
            Err(DatasetError::EmptyGroundTruth) => {
                warn!("pair {index} attempt {attempt}: no RRT path found, resampling");
            }
            Err(e) => return Err(e),
        }
    }
    Err(DatasetError::Exhausted {
        index,
        attempts: opts.max_attempts,
    })
}

/// Generates pairs `0..n` in parallel on up to `jobs` threads. Output order
/// and content do not depend on `jobs`.
pub fn generate_pairs(
    opts: &DatasetOptions,
    jobs: usize,
) -> Result<Vec<GeneratedPair>, DatasetError> {
    opts.validate()?;
    crate::par::map_indexed(opts.n_pairs, jobs, |i| generate_pair(opts, i))
        .into_iter()
        .collect()
}

/// Manifest entry of one pair; paths are relative to the dataset root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub kind: MapKind,
    pub map_seed: u64,
    pub rrt_base_seed: u64,
    pub attempts: usize,
    pub num_paths_found: usize,
    pub input: String,
    pub truth: String,
    pub heat: String,
    pub meta: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub base_seed: u64,
    pub width: usize,
    pub height: usize,
    pub paths_per_map: usize,
    pub rrt_budget: usize,
    pub goal_radius: f64,
    pub pairs: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn load(path: &FsPath) -> Result<Self, DatasetError> {
        let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn pair_id(index: usize) -> String {
    format!("{index:05}")
}

fn write_file(path: &FsPath, bytes: &[u8]) -> Result<(), DatasetError> {
    fs::write(path, bytes).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the four per-pair files plus a heatmap sidecar under `out_dir/maps`.
pub fn write_pair(out_dir: &FsPath, generated: &GeneratedPair) -> Result<ManifestEntry, DatasetError> {
    let id = pair_id(generated.index);
    let pair = &generated.pair;
    let maps = out_dir.join("maps");
    let rel = |suffix: &str| format!("maps/{id}{suffix}");
    let input = crate::gridworld::encode_map_image(&pair.map, Some(&pair.query))?;
    write_file(&out_dir.join(rel("_input.png")), &input)?;
    write_file(&out_dir.join(rel("_truth.png")), &render_ground_truth_image(pair)?)?;
    write_file(&out_dir.join(rel("_heat.png")), &pair.ground_truth.to_png()?)?;
    let meta = MapMeta::new(&pair.map, Some(&pair.query));
    write_file(&out_dir.join(rel(".json")), &serde_json::to_vec_pretty(&meta)?)?;
    write_file(
        &maps.join(format!("{id}_heat.json")),
        &serde_json::to_vec_pretty(&HeatmapMeta::max255(id.clone()))?,
    )?;
    Ok(ManifestEntry {
        kind: pair.map.kind(),
        map_seed: pair.map.seed(),
        rrt_base_seed: generated.rrt_base_seed,
        attempts: generated.attempts,
        num_paths_found: pair.num_paths_found,
        input: rel("_input.png"),
        truth: rel("_truth.png"),
        heat: rel("_heat.png"),
        meta: rel(".json"),
        id,
    })
}

/// Generates the corpus and writes it plus `manifest.json` to `out_dir`.
pub fn generate_dataset(
    opts: &DatasetOptions,
    out_dir: &FsPath,
    jobs: usize,
) -> Result<Manifest, DatasetError> {
    opts.validate()?;
    let maps = out_dir.join("maps");
    fs::create_dir_all(&maps).map_err(|source| DatasetError::Io {
        path: maps.clone(),
        source,
    })?;
    let entries: Vec<ManifestEntry> = crate::par::map_indexed(opts.n_pairs, jobs, |i| {
        let generated = generate_pair(opts, i)?;
        write_pair(out_dir, &generated)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let manifest = Manifest {
        base_seed: opts.base_seed,
        width: opts.width,
        height: opts.height,
        paths_per_map: opts.paths_per_map,
        rrt_budget: opts.rrt_budget,
        goal_radius: opts.goal_radius,
        pairs: entries,
    };
    write_file(
        &out_dir.join("manifest.json"),
        &serde_json::to_vec_pretty(&manifest)?,
    )?;
    Ok(manifest)
}

/// Loads pair `entry` of a dataset rooted at `root`.
pub fn load_pair(root: &FsPath, entry: &ManifestEntry) -> Result<DatasetPair, DatasetError> {
    let read = |rel: &str| {
        let path = root.join(rel);
        fs::read(&path).map_err(|source| DatasetError::Io { path, source })
    };
    let decoded = crate::gridworld::decode_map_image(&read(&entry.input)?)?;
    let meta: MapMeta = serde_json::from_slice(&read(&entry.meta)?)?;
    let map = decoded.map.with_provenance(meta.kind, meta.seed);
    let query = meta
        .query(&map)?
        .ok_or_else(|| DatasetError::NoQuery(format!("{} has no query", entry.meta)))?;
    let ground_truth = load_heatmap(&read(&entry.heat)?, &map)?;
    Ok(DatasetPair {
        map,
        query,
        ground_truth,
        num_paths_found: entry.num_paths_found,
    })
}

/// Mean of a path set's lengths; handy for logging.
pub fn mean_length(paths: &[Path]) -> Option<f64> {
    (!paths.is_empty()).then(|| paths.iter().map(|p| p.length).sum::<f64>() / paths.len() as f64)
}
