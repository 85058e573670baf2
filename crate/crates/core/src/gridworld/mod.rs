//! Occupancy-grid world model.
//!
//! A [`GridMap`] is a binary raster of free and obstacle cells. Planner math
//! runs on continuous [`WorldPoint`]s measured in cell units; a point is free
//! iff the cell containing it (the floor of its coordinates) is free.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod codec;
mod generate;

pub use codec::{
    decode_map_image, decode_map_rgb, disk_cells, encode_map_image, encode_rgb_png, paint_disks,
    render_map_rgb,
    DecodedMap, MapMeta, COLOR_FREE, COLOR_GOAL, COLOR_OBSTACLE, COLOR_PATH_REGION, COLOR_START,
    DISK_RADIUS,
};
pub use generate::generate_random_map;

/// Smallest accepted map side, in cells.
pub const MIN_DIM: usize = 16;
/// Default map side, in cells.
pub const DEFAULT_DIM: usize = 256;
/// Sample spacing used by [`GridMap::segment_obstacle_free`].
pub const DEFAULT_COLLISION_SPACING: f64 = 0.5;
/// Goal radius used when none is given.
pub const DEFAULT_GOAL_RADIUS: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("point ({x}, {y}) lies outside the {width}x{height} map")]
    OutOfBounds {
        x: f64,
        y: f64,
        width: usize,
        height: usize,
    },
    #[error("map dimensions {width}x{height} are below the {MIN_DIM}-cell minimum")]
    Dimensions { width: usize, height: usize },
    #[error("expected {expected} cells, got {actual}")]
    CellCount { expected: usize, actual: usize },
    #[error("map has no free cell")]
    NoFreeCell,
    #[error("map kind `{0}` has no random generator")]
    NotGenerable(MapKind),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("malformed map image: {0}")]
    Decode(String),
    #[error("unknown pixel color ({r}, {g}, {b}) at ({x}, {y})")]
    UnknownColor {
        r: u8,
        g: u8,
        b: u8,
        x: u32,
        y: u32,
    },
    #[error("failed to encode image: {0}")]
    Encode(String),
}

/// Generator family a map came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// Random axis-aligned rectangles.
    Blocks,
    /// Full-span walls with door openings.
    Gaps,
    /// Many small squares.
    Clutter,
    /// No obstacles.
    Empty,
    /// Hand-built or decoded from an image without metadata.
    Custom,
}

impl MapKind {
    /// The three randomized generator families.
    pub const GENERATED: [MapKind; 3] = [MapKind::Blocks, MapKind::Gaps, MapKind::Clutter];

    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::Blocks => "blocks",
            MapKind::Gaps => "gaps",
            MapKind::Clutter => "clutter",
            MapKind::Empty => "empty",
            MapKind::Custom => "custom",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MapKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "blocks" => Ok(MapKind::Blocks),
            "gaps" => Ok(MapKind::Gaps),
            "clutter" => Ok(MapKind::Clutter),
            "empty" => Ok(MapKind::Empty),
            "custom" => Ok(MapKind::Custom),
            other => Err(format!("unknown map kind `{other}`")),
        }
    }
}

/// Continuous planar state in cell units. Serializes as `[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct WorldPoint {
    pub x: f64,
    pub y: f64,
}

impl WorldPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: WorldPoint) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn distance_squared(self, other: WorldPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Center of cell `(cx, cy)`.
    pub fn cell_center(cx: usize, cy: usize) -> Self {
        Self::new(cx as f64 + 0.5, cy as f64 + 0.5)
    }
}

impl From<[f64; 2]> for WorldPoint {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<WorldPoint> for [f64; 2] {
    fn from(p: WorldPoint) -> Self {
        [p.x, p.y]
    }
}

/// Binary occupancy grid. Row-major, `y` selects the row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridMap {
    width: usize,
    height: usize,
    occupied: Vec<bool>,
    kind: MapKind,
    seed: u64,
}

impl GridMap {
    /// An obstacle-free map.
    pub fn empty(width: usize, height: usize) -> Result<Self, GridError> {
        check_dims(width, height)?;
        Ok(Self {
            width,
            height,
            occupied: vec![false; width * height],
            kind: MapKind::Empty,
            seed: 0,
        })
    }

    /// Builds a map from a row-major occupancy vector (`true` = obstacle).
    pub fn from_cells(
        width: usize,
        height: usize,
        occupied: Vec<bool>,
        kind: MapKind,
        seed: u64,
    ) -> Result<Self, GridError> {
        check_dims(width, height)?;
        if occupied.len() != width * height {
            return Err(GridError::CellCount {
                expected: width * height,
                actual: occupied.len(),
            });
        }
        if occupied.iter().all(|&o| o) {
            return Err(GridError::NoFreeCell);
        }
        Ok(Self {
            width,
            height,
            occupied,
            kind,
            seed,
        })
    }

    pub fn builder(width: usize, height: usize) -> MapBuilder {
        MapBuilder {
            width,
            height,
            occupied: vec![false; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Replaces the provenance tags, keeping the cells.
    pub fn with_provenance(mut self, kind: MapKind, seed: u64) -> Self {
        self.kind = kind;
        self.seed = seed;
        self
    }

    /// Row-major occupancy flags, `true` = obstacle.
    pub fn cells(&self) -> &[bool] {
        &self.occupied
    }

    #[inline]
    pub fn index(&self, cx: usize, cy: usize) -> usize {
        cy * self.width + cx
    }

    #[inline]
    pub fn cell_is_free(&self, cx: usize, cy: usize) -> bool {
        !self.occupied[self.index(cx, cy)]
    }

    pub fn free_cell_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| !o).count()
    }

    pub fn free_fraction(&self) -> f64 {
        self.free_cell_count() as f64 / self.occupied.len() as f64
    }

    /// Whether `p` lies in the half-open domain `[0, width) x [0, height)`.
    pub fn contains(&self, p: WorldPoint) -> bool {
        p.is_finite()
            && p.x >= 0.0
            && p.y >= 0.0
            && p.x < self.width as f64
            && p.y < self.height as f64
    }

    fn check_bounds(&self, p: WorldPoint) -> Result<(), GridError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(GridError::OutOfBounds {
                x: p.x,
                y: p.y,
                width: self.width,
                height: self.height,
            })
        }
    }

    /// Cell containing `p`. `p` must be in bounds.
    #[inline]
    pub fn cell_of(&self, p: WorldPoint) -> (usize, usize) {
        // Clamping only absorbs one-ulp overshoot from interpolation.
        let cx = (p.x.floor() as usize).min(self.width - 1);
        let cy = (p.y.floor() as usize).min(self.height - 1);
        (cx, cy)
    }

    /// Membership test for the free space.
    pub fn is_free(&self, p: WorldPoint) -> Result<bool, GridError> {
        self.check_bounds(p)?;
        let (cx, cy) = self.cell_of(p);
        Ok(self.cell_is_free(cx, cy))
    }

    /// Straight-line collision check at the default 0.5-cell spacing.
    pub fn segment_obstacle_free(&self, a: WorldPoint, b: WorldPoint) -> Result<bool, GridError> {
        self.segment_obstacle_free_with_spacing(a, b, DEFAULT_COLLISION_SPACING)
    }

    /// True iff every sample along `a -> b` at spacing at most `spacing`,
    /// endpoints included, lies in a free cell.
    ///
    /// Endpoints are put in a canonical order first so the answer does not
    /// depend on direction.
    pub fn segment_obstacle_free_with_spacing(
        &self,
        a: WorldPoint,
        b: WorldPoint,
        spacing: f64,
    ) -> Result<bool, GridError> {
        self.check_bounds(a)?;
        self.check_bounds(b)?;
        let (a, b) = if (b.x, b.y) < (a.x, a.y) { (b, a) } else { (a, b) };
        let length = a.distance(b);
        let steps = (length / spacing).ceil() as usize;
        if steps == 0 {
            let (cx, cy) = self.cell_of(a);
            return Ok(self.cell_is_free(cx, cy));
        }
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        for i in 0..=steps {
            let p = if i == steps {
                b
            } else {
                let t = i as f64 / steps as f64;
                WorldPoint::new(a.x + dx * t, a.y + dy * t)
            };
            let (cx, cy) = self.cell_of(p);
            if !self.cell_is_free(cx, cy) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact test: true iff no obstacle cell touches the closed segment `a -> b`.
    ///
    /// A segment running along a cell boundary counts as touching the cells
    /// on both sides.
    pub fn segment_obstacle_free_exact(
        &self,
        a: WorldPoint,
        b: WorldPoint,
    ) -> Result<bool, GridError> {
        self.check_bounds(a)?;
        self.check_bounds(b)?;
        let (a, b) = if (b.x, b.y) < (a.x, a.y) { (b, a) } else { (a, b) };
        let (w, h) = (self.width as i64, self.height as i64);
        let span = |lo: f64, hi: f64, n: i64| {
            let first = if lo.fract() == 0.0 { lo as i64 - 1 } else { lo.floor() as i64 };
            (first.max(0), (hi.floor() as i64).min(n - 1))
        };
        let y_at = |x: f64| {
            if b.x == a.x {
                None
            } else {
                Some(a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x))
            }
        };
        let (c0, c1) = span(a.x, b.x, w);
        for cx in c0..=c1 {
            let x_lo = a.x.max(cx as f64);
            let x_hi = b.x.min((cx + 1) as f64);
            if x_lo > x_hi {
                continue;
            }
            let (y_lo, y_hi) = match (y_at(x_lo), y_at(x_hi)) {
                (Some(p), Some(q)) => (p.min(q), p.max(q)),
                _ => (a.y.min(b.y), a.y.max(b.y)),
            };
            let (r0, r1) = span(y_lo, y_hi, h);
            for cy in r0..=r1 {
                if !self.cell_is_free(cx as usize, cy as usize) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn check_dims(width: usize, height: usize) -> Result<(), GridError> {
    if width < MIN_DIM || height < MIN_DIM {
        Err(GridError::Dimensions { width, height })
    } else {
        Ok(())
    }
}

/// Incremental construction of a [`GridMap`].
#[derive(Clone, Debug)]
pub struct MapBuilder {
    width: usize,
    height: usize,
    occupied: Vec<bool>,
}

impl MapBuilder {
    /// Marks cells `[x0, x1) x [y0, y1)` as obstacles, clipped to the map.
    pub fn rect(mut self, x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        self.fill_rect(x0, y0, x1, y1, true);
        self
    }

    /// Clears cells `[x0, x1) x [y0, y1)`, clipped to the map.
    pub fn clear_rect(mut self, x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        self.fill_rect(x0, y0, x1, y1, false);
        self
    }

    pub fn obstacle(self, cx: usize, cy: usize) -> Self {
        self.rect(cx, cy, cx + 1, cy + 1)
    }

    pub(crate) fn fill_rect(&mut self, x0: usize, y0: usize, x1: usize, y1: usize, value: bool) {
        let x1 = x1.min(self.width);
        let y1 = y1.min(self.height);
        for y in y0.min(y1)..y1 {
            let row = y * self.width;
            self.occupied[row + x0.min(x1)..row + x1].fill(value);
        }
    }

    pub(crate) fn obstacle_count(&self) -> usize {
        self.occupied.iter().filter(|&&o| o).count()
    }

    pub(crate) fn count_free_in(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> usize {
        let x1 = x1.min(self.width);
        let y1 = y1.min(self.height);
        (y0.min(y1)..y1)
            .map(|y| {
                let row = y * self.width;
                self.occupied[row + x0.min(x1)..row + x1]
                    .iter()
                    .filter(|&&o| !o)
                    .count()
            })
            .sum()
    }

    pub fn build(self, kind: MapKind, seed: u64) -> Result<GridMap, GridError> {
        GridMap::from_cells(self.width, self.height, self.occupied, kind, seed)
    }
}

/// Start state, goal state and goal radius over a map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanningQuery {
    pub start: WorldPoint,
    pub goal: WorldPoint,
    pub goal_radius: f64,
}

impl PlanningQuery {
    /// Validates that start and goal are free and the radius positive.
    pub fn new(
        map: &GridMap,
        start: WorldPoint,
        goal: WorldPoint,
        goal_radius: f64,
    ) -> Result<Self, GridError> {
        let query = Self {
            start,
            goal,
            goal_radius,
        };
        query.validate(map)?;
        Ok(query)
    }

    pub fn validate(&self, map: &GridMap) -> Result<(), GridError> {
        if !(self.goal_radius > 0.0 && self.goal_radius.is_finite()) {
            return Err(GridError::InvalidQuery(format!(
                "goal radius must be positive, got {}",
                self.goal_radius
            )));
        }
        if !map.is_free(self.start)? {
            return Err(GridError::InvalidQuery("start lies in an obstacle".into()));
        }
        if !map.is_free(self.goal)? {
            return Err(GridError::InvalidQuery("goal lies in an obstacle".into()));
        }
        Ok(())
    }

    /// Membership in the open goal disk.
    pub fn in_goal(&self, p: WorldPoint) -> bool {
        p.distance(self.goal) < self.goal_radius
    }
}
