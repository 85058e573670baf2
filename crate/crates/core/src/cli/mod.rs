//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns the process exit code.

use std::ffi::OsString;
use std::fs;
use std::path::{Path as FsPath, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use crate::dataset::{
    self, generate_dataset, load_heatmap, load_pair, sample_query, DatasetOptions, Manifest,
};
use crate::evaluation::{
    connectivity_test, emit_report, run_benchmark, BenchmarkCase, ConnectivityVerdict,
    HeatmapSource, PlannerSpec, ReportFormat, DEFAULT_CONNECTIVITY_BUDGET,
};
use crate::gridworld::{
    decode_map_image, encode_map_image, encode_rgb_png, generate_random_map, GridMap, MapKind,
    MapMeta, PlanningQuery, DEFAULT_DIM, DEFAULT_GOAL_RADIUS,
};
use crate::planners::{plan, PlanReport, PlannerConfig, PlannerMode};
use crate::render::{render_heatmap_overlay, render_plan_rgb};
use crate::sampling::{derive_seed, seeded_rng, SamplerConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "HEATMAP_RRT_LOG";

#[derive(Debug, Parser)]
#[command(name = "heatmap-rrt", version, about = "RRT / RRT* / heatmap-guided RRT* toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate random maps with a start/goal query.
    GenMaps(GenMapsArgs),
    /// Generate a ground-truth heatmap dataset.
    GenDataset(GenDatasetArgs),
    /// Run one planner on a map image.
    Plan(PlanArgs),
    /// Compare planners over a dataset.
    Benchmark(BenchmarkArgs),
    /// Connectivity test of heatmaps over a dataset.
    EvalHeatmap(EvalHeatmapArgs),
    /// Render a map, plan or heatmap to PNG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct GenMapsArgs {
    #[arg(long, value_delimiter = ',', default_values_t = MapKind::GENERATED.to_vec())]
    pub kinds: Vec<MapKind>,
    /// Maps per kind.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = DEFAULT_DIM)]
    pub width: usize,
    #[arg(long, default_value_t = DEFAULT_DIM)]
    pub height: usize,
    #[arg(long, default_value_t = DEFAULT_GOAL_RADIUS)]
    pub goal_radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenDatasetArgs {
    #[arg(long, default_value_t = 10)]
    pub pairs: usize,
    #[arg(long, value_delimiter = ',', default_values_t = MapKind::GENERATED.to_vec())]
    pub kinds: Vec<MapKind>,
    #[arg(long, default_value_t = DEFAULT_DIM)]
    pub width: usize,
    #[arg(long, default_value_t = DEFAULT_DIM)]
    pub height: usize,
    #[arg(long, default_value_t = dataset::DEFAULT_PATHS_PER_MAP)]
    pub paths_per_map: usize,
    #[arg(long, default_value_t = dataset::DEFAULT_RRT_BUDGET)]
    pub rrt_budget: usize,
    #[arg(long, default_value_t = DEFAULT_GOAL_RADIUS)]
    pub goal_radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct PlannerArgs {
    #[arg(long, default_value_t = crate::planners::DEFAULT_MAX_ITERATIONS)]
    pub iters: usize,
    #[arg(long, default_value_t = crate::planners::DEFAULT_STEP_SIZE)]
    pub step: f64,
    #[arg(long, default_value_t = crate::planners::DEFAULT_REWIRE_RADIUS)]
    pub radius: f64,
    #[arg(long, default_value_t = crate::gridworld::DEFAULT_COLLISION_SPACING)]
    pub spacing: f64,
    /// Exact cell-traversal collision checks; overrides --spacing.
    #[arg(long)]
    pub exact_collision: bool,
    /// Probability of drawing from the heatmap in guided mode.
    #[arg(long, default_value_t = crate::sampling::DEFAULT_MIX_PROBABILITY)]
    pub mix: f64,
}

impl PlannerArgs {
    fn config(&self, mode: PlannerMode) -> Result<PlannerConfig> {
        let cfg = PlannerConfig {
            step_size: self.step,
            max_iterations: self.iters,
            rewire_radius: self.radius,
            collision_spacing: self.spacing,
            mode,
            exact_collision: self.exact_collision,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn sampler(&self, seed: u64) -> Result<SamplerConfig> {
        let cfg = SamplerConfig {
            mix_probability: self.mix,
            rng_seed: seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, default_value = "rrt_star")]
    pub mode: PlannerMode,
    /// Map PNG.
    #[arg(long)]
    pub map: PathBuf,
    /// Sidecar JSON with start/goal; defaults to the disks in the map image.
    #[arg(long)]
    pub query: Option<PathBuf>,
    /// Heatmap PNG (grayscale or green overlay); required by heatmap_rrt_star.
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
    #[command(flatten)]
    pub planner: PlannerArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Render the tree and best path to this PNG.
    #[arg(long)]
    pub png: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Dataset root containing manifest.json.
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [PlannerMode::RrtStar, PlannerMode::HeatmapRrtStar])]
    pub planners: Vec<PlannerMode>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    /// Only the first N maps of the manifest.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Directory of `{id}_heat.png` model outputs; ground truth when absent.
    #[arg(long)]
    pub heatmaps: Option<PathBuf>,
    #[command(flatten)]
    pub planner: PlannerArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalHeatmapArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    /// Directory of `{id}_heat.png` files to test; ground truth when absent.
    #[arg(long)]
    pub heatmaps: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CONNECTIVITY_BUDGET)]
    pub budget: usize,
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub map: PathBuf,
    #[arg(long)]
    pub query: Option<PathBuf>,
    /// Plan JSON whose waypoints are drawn.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Heatmap PNG overlaid in green.
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (program name first), runs the command and maps the outcome
/// to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    init_logging();
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_RUNTIME
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::GenMaps(a) => gen_maps(&a),
        Command::GenDataset(a) => gen_dataset(&a),
        Command::Plan(a) => plan_cmd(&a),
        Command::Benchmark(a) => benchmark(&a),
        Command::EvalHeatmap(a) => eval_heatmap(&a),
        Command::Render(a) => render(&a),
    }
}

fn read(path: &FsPath) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &FsPath, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn gen_maps(a: &GenMapsArgs) -> Result<()> {
    if a.kinds.iter().any(|k| !MapKind::GENERATED.contains(k)) {
        bail!("--kinds accepts blocks, gaps and clutter only");
    }
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for (ki, &kind) in a.kinds.iter().enumerate() {
        for i in 0..a.count {
            let seed = derive_seed(a.seed, (ki * a.count + i) as u64);
            let map = generate_random_map(kind, a.width, a.height, seed)?;
            let query = sample_query(&map, a.goal_radius, &mut seeded_rng(derive_seed(seed, 1)))?;
            let stem = format!("{kind}_{i:04}");
            write(&a.out.join(format!("{stem}.png")), &encode_map_image(&map, Some(&query))?)?;
            write(
                &a.out.join(format!("{stem}.json")),
                &to_json(&MapMeta::new(&map, Some(&query)))?,
            )?;
            info!("wrote {stem}");
        }
    }
    Ok(())
}

fn gen_dataset(a: &GenDatasetArgs) -> Result<()> {
    let opts = DatasetOptions {
        n_pairs: a.pairs,
        kinds: a.kinds.clone(),
        base_seed: a.seed,
        width: a.width,
        height: a.height,
        paths_per_map: a.paths_per_map,
        rrt_budget: a.rrt_budget,
        goal_radius: a.goal_radius,
        ..DatasetOptions::default()
    };
    let manifest = generate_dataset(&opts, &a.out, a.jobs)?;
    info!("wrote {} pairs to {}", manifest.pairs.len(), a.out.display());
    Ok(())
}

/// Loads a map image plus its query, from a sidecar when given.
fn load_map(map_path: &FsPath, query_path: Option<&FsPath>) -> Result<(GridMap, Option<PlanningQuery>)> {
    let decoded = decode_map_image(&read(map_path)?)
        .with_context(|| format!("decoding {}", map_path.display()))?;
    match query_path {
        Some(p) => {
            let meta: MapMeta = serde_json::from_slice(&read(p)?)
                .with_context(|| format!("parsing {}", p.display()))?;
            if (meta.width, meta.height) != (decoded.map.width(), decoded.map.height()) {
                bail!("{} describes a {}x{} map", p.display(), meta.width, meta.height);
            }
            let map = decoded.map.with_provenance(meta.kind, meta.seed);
            let query = meta.query(&map)?;
            Ok((map, query.or(decoded.query)))
        }
        None => Ok((decoded.map, decoded.query)),
    }
}

fn map_id(path: &FsPath) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn plan_cmd(a: &PlanArgs) -> Result<()> {
    let cfg = a.planner.config(a.mode)?;
    let sampler = a.planner.sampler(derive_seed(a.seed, 1))?;
    let (map, query) = load_map(&a.map, a.query.as_deref())?;
    let query = query.ok_or_else(|| anyhow!("no start/goal in the map image or sidecar"))?;
    let heatmap = match (&a.heatmap, a.mode.uses_heatmap()) {
        (Some(p), true) => Some(load_heatmap(&read(p)?, &map)?),
        (None, true) => bail!("--heatmap is required for {}", a.mode),
        (_, false) => None,
    };
    let result = plan(&map, &query, &cfg, &sampler, heatmap.as_ref(), &mut seeded_rng(a.seed))?;
    let report: PlanReport = result.report(&map_id(&a.map), a.mode, a.seed);
    let json = to_json(&report)?;
    match &a.out {
        Some(p) => write(p, &json)?,
        None => print!("{}", String::from_utf8(json)?),
    }
    if let Some(p) = &a.png {
        let path = result.best_path.as_ref().map(|p| p.waypoints.as_slice());
        let img = render_plan_rgb(&map, Some(&query), Some(&result.tree), path);
        write(p, &encode_rgb_png(&img)?)?;
    }
    Ok(())
}

fn load_cases(root: &FsPath, limit: Option<usize>) -> Result<(Manifest, Vec<BenchmarkCase>)> {
    let manifest = Manifest::load(&root.join("manifest.json"))?;
    let n = limit.unwrap_or(usize::MAX).min(manifest.pairs.len());
    let cases = manifest.pairs[..n]
        .iter()
        .map(|entry| {
            let pair = load_pair(root, entry)?;
            Ok(BenchmarkCase {
                id: entry.id.clone(),
                map: pair.map,
                query: pair.query,
                ground_truth: Some(pair.ground_truth),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((manifest, cases))
}

fn benchmark(a: &BenchmarkArgs) -> Result<()> {
    let (_, cases) = load_cases(&a.dataset, a.limit)?;
    let source = match &a.heatmaps {
        Some(dir) => HeatmapSource::Model { dir: dir.clone() },
        None => HeatmapSource::Oracle,
    };
    let specs = a
        .planners
        .iter()
        .map(|&mode| {
            Ok(PlannerSpec {
                name: mode.as_str().to_string(),
                config: a.planner.config(mode)?,
                sampler: a.planner.sampler(0)?,
                heatmap: source.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let outcome = run_benchmark(&cases, &specs, a.trials, a.seed, a.jobs)?;
    for e in &outcome.errors {
        eprintln!("warning: {} / {} / seed {}: {}", e.map_id, e.planner, e.seed, e.message);
    }
    write(&a.csv, &emit_report(&outcome.records, ReportFormat::Csv)?)?;
    if let Some(p) = &a.summary {
        write(p, &emit_report(&outcome.records, ReportFormat::Json)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EvalReport {
    n: usize,
    successes: usize,
    success_rate: f64,
    verdicts: Vec<ConnectivityVerdict>,
}

fn eval_heatmap(a: &EvalHeatmapArgs) -> Result<()> {
    let (_, cases) = load_cases(&a.dataset, a.limit)?;
    let verdicts = crate::par::map_indexed(cases.len(), a.jobs, |i| -> Result<ConnectivityVerdict> {
        let case = &cases[i];
        let loaded;
        let heatmap = match &a.heatmaps {
            Some(dir) => {
                let path = dir.join(format!("{}_heat.png", case.id));
                loaded = load_heatmap(&read(&path)?, &case.map)
                    .with_context(|| format!("loading {}", path.display()))?;
                &loaded
            }
            None => case.ground_truth.as_ref().expect("dataset pairs carry ground truth"),
        };
        Ok(connectivity_test(
            &case.id,
            &case.map,
            &case.query,
            heatmap,
            a.budget,
            derive_seed(a.seed, i as u64),
        )?)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let successes = verdicts.iter().filter(|v| v.success).count();
    let report = EvalReport {
        n: verdicts.len(),
        successes,
        success_rate: if verdicts.is_empty() {
            0.0
        } else {
            successes as f64 / verdicts.len() as f64
        },
        verdicts,
    };
    write(&a.out, &to_json(&report)?)
}

fn render(a: &RenderArgs) -> Result<()> {
    let (map, query) = load_map(&a.map, a.query.as_deref())?;
    let img = match (&a.heatmap, &a.plan) {
        (Some(_), Some(_)) => bail!("--heatmap and --plan are mutually exclusive"),
        (Some(h), None) => {
            let heatmap = load_heatmap(&read(h)?, &map)?;
            render_heatmap_overlay(&map, query.as_ref(), &heatmap)
        }
        (None, Some(p)) => {
            let report: PlanReport = serde_json::from_slice(&read(p)?)
                .with_context(|| format!("parsing {}", p.display()))?;
            render_plan_rgb(&map, query.as_ref(), None, Some(&report.waypoints))
        }
        (None, None) => render_plan_rgb(&map, query.as_ref(), None, None),
    };
    write(&a.out, &encode_rgb_png(&img)?)
}
