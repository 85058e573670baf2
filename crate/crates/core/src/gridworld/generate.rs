use rand::Rng;

use super::{GridError, GridMap, MapBuilder, MapKind};
use crate::sampling::{derive_seed, seeded_rng};

/// Generates a random map of the given family.
///
/// Deterministic in `(kind, width, height, seed)`. Every generator leaves at
/// least 40% of the cells free and only places axis-aligned rectangles.
pub fn generate_random_map(
    kind: MapKind,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<GridMap, GridError> {
    if width < super::MIN_DIM || height < super::MIN_DIM {
        return Err(GridError::Dimensions { width, height });
    }
    let builder = GridMap::builder(width, height);
    let mut rng = seeded_rng(derive_seed(seed, kind as u64));
    let builder = match kind {
        MapKind::Blocks => blocks(builder, width, height, &mut rng),
        MapKind::Gaps => gaps(builder, width, height, &mut rng),
        MapKind::Clutter => clutter(builder, width, height, &mut rng),
        MapKind::Empty => builder,
        MapKind::Custom => return Err(GridError::NotGenerable(kind)),
    };
    builder.build(kind, seed)
}

const MIN_FREE_FRACTION: f64 = 0.4;

fn blocks<R: Rng>(mut b: MapBuilder, w: usize, h: usize, rng: &mut R) -> MapBuilder {
    let area = (w * h) as f64;
    let count = rng.gen_range(6..=12);
    // Obstacles never cover more than 40% of the area.
    let max_obstacles = (area * 0.4) as usize;
    let min_w = ((w as f64 * 0.06) as usize).max(1);
    let max_w = ((w as f64 * 0.22) as usize).max(2);
    let min_h = ((h as f64 * 0.06) as usize).max(1);
    let max_h = ((h as f64 * 0.22) as usize).max(2);
    for _ in 0..count {
        let rw = rng.gen_range(min_w..=max_w);
        let rh = rng.gen_range(min_h..=max_h);
        let x0 = rng.gen_range(0..=w - rw);
        let y0 = rng.gen_range(0..=h - rh);
        let newly = b.count_free_in(x0, y0, x0 + rw, y0 + rh);
        if b.obstacle_count() + newly > max_obstacles {
            continue;
        }
        b.fill_rect(x0, y0, x0 + rw, y0 + rh, true);
    }
    b
}

fn gaps<R: Rng>(mut b: MapBuilder, w: usize, h: usize, rng: &mut R) -> MapBuilder {
    let horizontal = rng.gen_bool(0.5);
    // `span` runs along the wall, `depth` across the walls.
    let (span, depth) = if horizontal { (w, h) } else { (h, w) };
    let walls: usize = rng.gen_range(3..=5);
    let thickness = (depth / 20).max(1);
    let slot = depth / (walls + 1);
    let door_min = (span / 12).max(2);
    let door_max = (span / 8).max(door_min);
    for i in 1..=walls {
        let jitter = (slot / 4) as isize;
        let offset = if jitter > 0 {
            rng.gen_range(-jitter..=jitter)
        } else {
            0
        };
        let pos = ((i * slot) as isize + offset).clamp(0, (depth - thickness) as isize) as usize;
        let wall = |b: &mut MapBuilder, a0: usize, a1: usize, value: bool| {
            if horizontal {
                b.fill_rect(a0, pos, a1, pos + thickness, value);
            } else {
                b.fill_rect(pos, a0, pos + thickness, a1, value);
            }
        };
        wall(&mut b, 0, span, true);
        let doors = rng.gen_range(1..=2);
        for _ in 0..doors {
            let door = rng.gen_range(door_min..=door_max);
            let start = rng.gen_range(0..=span - door);
            wall(&mut b, start, start + door, false);
        }
    }
    b
}

fn clutter<R: Rng>(mut b: MapBuilder, w: usize, h: usize, rng: &mut R) -> MapBuilder {
    let side = w.min(h);
    let min_side = (side / 40).max(1);
    let max_side = (side / 16).max(min_side + 1);
    let target = rng.gen_range(0.15..0.3) * (w * h) as f64;
    debug_assert!(target < (1.0 - MIN_FREE_FRACTION) * (w * h) as f64);
    let mut attempts = 0;
    while (b.obstacle_count() as f64) < target && attempts < 100_000 {
        attempts += 1;
        let s = rng.gen_range(min_side..=max_side);
        let x0 = rng.gen_range(0..=w - s);
        let y0 = rng.gen_range(0..=h - s);
        b.fill_rect(x0, y0, x0 + s, y0 + s, true);
    }
    b
}
