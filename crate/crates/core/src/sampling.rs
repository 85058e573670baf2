//! Free-space samplers: uniform rejection sampling, inverse-CDF sampling from
//! a heatmap distribution, and the coin-flip hybrid of the two.

use std::io::Cursor;

use image::{GrayImage, ImageFormat, Luma};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gridworld::{GridMap, WorldPoint};

/// Rejection attempts before [`sample_uniform_free`] gives up.
pub const MAX_REJECTION_TRIES: usize = 1_000_000;
/// Default probability of drawing from the heatmap in the hybrid sampler.
pub const DEFAULT_MIX_PROBABILITY: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("no free sample after {0} rejection tries")]
    RejectionExhausted(usize),
    #[error("heatmap has no mass on free cells")]
    EmptyDistribution,
    #[error("heatmap is {got_w}x{got_h} but the map is {want_w}x{want_h}")]
    DimensionMismatch {
        got_w: usize,
        got_h: usize,
        want_w: usize,
        want_h: usize,
    },
    #[error("invalid heatmap weight {weight} at cell {index}")]
    InvalidWeight { index: usize, weight: f64 },
    #[error("mix probability must lie in [0, 1], got {0}")]
    InvalidMix(f64),
    #[error("heatmap image: {0}")]
    Image(String),
}

/// Deterministic RNG used for every stochastic stream in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes an index into a base seed (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of an independent planner trial.
pub fn trial_seed(base: u64, trial: u64) -> u64 {
    base ^ trial
}

/// Per-cell nonnegative weights over a map-sized raster.
#[derive(Clone, Debug, PartialEq)]
pub struct Heatmap {
    width: usize,
    height: usize,
    weights: Vec<f64>,
}

impl Heatmap {
    /// Fails if any weight is negative or non-finite, or all are zero.
    pub fn new(width: usize, height: usize, weights: Vec<f64>) -> Result<Self, SamplingError> {
        if weights.len() != width * height {
            return Err(SamplingError::Image(format!(
                "expected {} weights, got {}",
                width * height,
                weights.len()
            )));
        }
        if let Some((index, &weight)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(SamplingError::InvalidWeight { index, weight });
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(SamplingError::EmptyDistribution);
        }
        Ok(Self {
            width,
            height,
            weights,
        })
    }

    /// Constant weight over every cell.
    pub fn uniform(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            weights: vec![1.0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, cx: usize, cy: usize) -> f64 {
        self.weights[cy * self.width + cx]
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Cells with positive weight.
    pub fn support(&self) -> Vec<bool> {
        self.weights.iter().map(|&w| w > 0.0).collect()
    }

    /// Grayscale raster with the maximum weight mapped to 255.
    pub fn to_gray(&self) -> GrayImage {
        let max = self.max_weight();
        GrayImage::from_fn(self.width as u32, self.height as u32, |x, y| {
            let w = self.weight(x as usize, y as usize);
            let v = (w / max * 255.0).round().clamp(0.0, 255.0) as u8;
            // Positive weights stay in the support after quantization.
            Luma([if w > 0.0 { v.max(1) } else { 0 }])
        })
    }

    /// 8-bit grayscale PNG in the `max255` exchange normalization.
    pub fn to_png(&self) -> Result<Vec<u8>, SamplingError> {
        let mut out = Cursor::new(Vec::new());
        self.to_gray()
            .write_to(&mut out, ImageFormat::Png)
            .map_err(|e| SamplingError::Image(e.to_string()))?;
        Ok(out.into_inner())
    }

    /// Reads intensities of a grayscale raster directly as weights.
    pub fn from_gray(img: &GrayImage) -> Result<Self, SamplingError> {
        let weights = img.pixels().map(|p| p.0[0] as f64).collect();
        Self::new(img.width() as usize, img.height() as usize, weights)
    }

    pub fn check_dims(&self, map: &GridMap) -> Result<(), SamplingError> {
        if self.width != map.width() || self.height != map.height() {
            return Err(SamplingError::DimensionMismatch {
                got_w: self.width,
                got_h: self.height,
                want_w: map.width(),
                want_h: map.height(),
            });
        }
        Ok(())
    }
}

/// JSON sidecar of the heatmap exchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeatmapMeta {
    pub map_id: String,
    pub normalization: String,
}

impl HeatmapMeta {
    pub fn max255(map_id: impl Into<String>) -> Self {
        Self {
            map_id: map_id.into(),
            normalization: "max255".into(),
        }
    }
}

/// Normalized categorical distribution over free cells, sampled by
/// inverse-CDF lookup.
#[derive(Clone, Debug)]
pub struct SamplingDistribution {
    width: usize,
    cells: Vec<u32>,
    cumulative: Vec<f64>,
    total: f64,
}

/// Masks obstacle cells of `heatmap` and normalizes the remaining weights.
pub fn build_distribution(
    heatmap: &Heatmap,
    map: &GridMap,
) -> Result<SamplingDistribution, SamplingError> {
    heatmap.check_dims(map)?;
    let mut cells = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0.0;
    for (i, (&w, &occupied)) in heatmap.weights.iter().zip(map.cells()).enumerate() {
        if w > 0.0 && !occupied {
            total += w;
            cells.push(i as u32);
            cumulative.push(total);
        }
    }
    if cells.is_empty() {
        return Err(SamplingError::EmptyDistribution);
    }
    Ok(SamplingDistribution {
        width: map.width(),
        cells,
        cumulative,
        total,
    })
}

impl SamplingDistribution {
    /// Probability mass of every cell, row-major over the map.
    pub fn cell_probabilities(&self, map_cells: usize) -> Vec<f64> {
        let mut p = vec![0.0; map_cells];
        let mut prev = 0.0;
        for (&cell, &c) in self.cells.iter().zip(&self.cumulative) {
            p[cell as usize] = (c - prev) / self.total;
            prev = c;
        }
        p
    }

    pub fn support_len(&self) -> usize {
        self.cells.len()
    }

    /// Row-major index of a cell drawn with probability proportional to its weight.
    pub fn sample_cell<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.gen::<f64>() * self.total;
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.cells[k.min(self.cells.len() - 1)] as usize
    }
}

/// Uniform point inside cell `(cx, cy)`.
fn jitter<R: Rng + ?Sized>(cx: usize, cy: usize, rng: &mut R) -> WorldPoint {
    let inside = |c: usize, u: f64| {
        let v = c as f64 + u;
        v.min((c as f64 + 1.0).next_down())
    };
    let x = inside(cx, rng.gen::<f64>());
    let y = inside(cy, rng.gen::<f64>());
    WorldPoint::new(x, y)
}

/// Rejection-samples a point uniformly over the free area of `map`.
pub fn sample_uniform_free<R: Rng + ?Sized>(
    map: &GridMap,
    rng: &mut R,
) -> Result<WorldPoint, SamplingError> {
    let (w, h) = (map.width() as f64, map.height() as f64);
    for _ in 0..MAX_REJECTION_TRIES {
        let p = WorldPoint::new(
            (rng.gen::<f64>() * w).min(w.next_down()),
            (rng.gen::<f64>() * h).min(h.next_down()),
        );
        let (cx, cy) = map.cell_of(p);
        if map.cell_is_free(cx, cy) {
            return Ok(p);
        }
    }
    Err(SamplingError::RejectionExhausted(MAX_REJECTION_TRIES))
}

/// Draws a cell from `dist`, then a uniform point inside it.
pub fn sample_nonuniform<R: Rng + ?Sized>(dist: &SamplingDistribution, rng: &mut R) -> WorldPoint {
    let cell = dist.sample_cell(rng);
    jitter(cell % dist.width, cell / dist.width, rng)
}

/// Hybrid-sampler settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Probability of drawing from the heatmap instead of uniformly.
    pub mix_probability: f64,
    /// Seed of the coin-flip stream.
    pub rng_seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            mix_probability: DEFAULT_MIX_PROBABILITY,
            rng_seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<(), SamplingError> {
        if (0.0..=1.0).contains(&self.mix_probability) {
            Ok(())
        } else {
            Err(SamplingError::InvalidMix(self.mix_probability))
        }
    }
}

/// Source of `x_rand` for the planners.
pub trait Sampler {
    fn sample<R: Rng + ?Sized>(
        &mut self,
        map: &GridMap,
        rng: &mut R,
    ) -> Result<WorldPoint, SamplingError>;
}

/// Uniform free-space sampling.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformSampler;

impl Sampler for UniformSampler {
    fn sample<R: Rng + ?Sized>(
        &mut self,
        map: &GridMap,
        rng: &mut R,
    ) -> Result<WorldPoint, SamplingError> {
        sample_uniform_free(map, rng)
    }
}

/// Sampling from a heatmap distribution only.
#[derive(Clone, Copy, Debug)]
pub struct NonuniformSampler<'a>(pub &'a SamplingDistribution);

impl Sampler for NonuniformSampler<'_> {
    fn sample<R: Rng + ?Sized>(
        &mut self,
        _map: &GridMap,
        rng: &mut R,
    ) -> Result<WorldPoint, SamplingError> {
        Ok(sample_nonuniform(self.0, rng))
    }
}

/// Per-call coin flip between [`sample_nonuniform`] (probability
/// `mix_probability`) and [`sample_uniform_free`].
///
/// The coin comes from its own stream seeded by `SamplerConfig::rng_seed`;
/// points come from the caller's RNG. With a mix of 0 the point stream is
/// therefore identical to [`UniformSampler`].
#[derive(Clone, Debug)]
pub struct HybridSampler<'a> {
    dist: &'a SamplingDistribution,
    mix: f64,
    coin: ChaCha8Rng,
}

impl<'a> HybridSampler<'a> {
    pub fn new(dist: &'a SamplingDistribution, cfg: &SamplerConfig) -> Result<Self, SamplingError> {
        cfg.validate()?;
        Ok(Self {
            dist,
            mix: cfg.mix_probability,
            coin: seeded_rng(cfg.rng_seed),
        })
    }
}

impl Sampler for HybridSampler<'_> {
    fn sample<R: Rng + ?Sized>(
        &mut self,
        map: &GridMap,
        rng: &mut R,
    ) -> Result<WorldPoint, SamplingError> {
        if self.coin.gen::<f64>() < self.mix {
            Ok(sample_nonuniform(self.dist, rng))
        } else {
            sample_uniform_free(map, rng)
        }
    }
}
