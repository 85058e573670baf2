//! Bit-exact RGB image encoding of maps and planning queries.

use std::io::Cursor;

use image::{ImageFormat, Rgb, RgbImage};
use serde::{Deserialize, Serialize};

use super::{GridError, GridMap, MapKind, PlanningQuery, WorldPoint, DEFAULT_GOAL_RADIUS};

pub const COLOR_OBSTACLE: Rgb<u8> = Rgb([0, 0, 0]);
pub const COLOR_FREE: Rgb<u8> = Rgb([255, 255, 255]);
pub const COLOR_START: Rgb<u8> = Rgb([255, 0, 0]);
pub const COLOR_GOAL: Rgb<u8> = Rgb([0, 0, 255]);
pub const COLOR_PATH_REGION: Rgb<u8> = Rgb([0, 255, 0]);

/// Radius of the start and goal annotation disks, in cells.
pub const DISK_RADIUS: f64 = 4.0;

/// JSON sidecar stored next to a map image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapMeta {
    pub width: usize,
    pub height: usize,
    pub kind: MapKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<WorldPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<WorldPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal_radius: Option<f64>,
}

impl MapMeta {
    pub fn new(map: &GridMap, query: Option<&PlanningQuery>) -> Self {
        Self {
            width: map.width(),
            height: map.height(),
            kind: map.kind(),
            seed: map.seed(),
            start: query.map(|q| q.start),
            goal: query.map(|q| q.goal),
            goal_radius: query.map(|q| q.goal_radius),
        }
    }

    /// The query recorded in the sidecar, validated against `map`.
    pub fn query(&self, map: &GridMap) -> Result<Option<PlanningQuery>, GridError> {
        match (self.start, self.goal) {
            (Some(start), Some(goal)) => {
                let r = self.goal_radius.unwrap_or(DEFAULT_GOAL_RADIUS);
                PlanningQuery::new(map, start, goal, r).map(Some)
            }
            (None, None) => Ok(None),
            _ => Err(GridError::InvalidQuery(
                "sidecar has only one of start/goal".into(),
            )),
        }
    }
}

/// Cells whose centers lie within [`DISK_RADIUS`] of `center`, clipped to the map.
pub fn disk_cells(width: usize, height: usize, center: WorldPoint) -> Vec<(usize, usize)> {
    let r = DISK_RADIUS;
    let x0 = (center.x - r).floor().max(0.0) as usize;
    let y0 = (center.y - r).floor().max(0.0) as usize;
    let x1 = ((center.x + r).ceil().max(0.0) as usize).min(width);
    let y1 = ((center.y + r).ceil().max(0.0) as usize).min(height);
    let mut cells = Vec::new();
    for cy in y0..y1 {
        for cx in x0..x1 {
            if WorldPoint::cell_center(cx, cy).distance_squared(center) <= r * r {
                cells.push((cx, cy));
            }
        }
    }
    cells
}

/// Renders a map (plus optional start/goal disks) to an RGB raster.
///
/// Disks are painted over free cells only, so obstacle pixels survive.
pub fn render_map_rgb(map: &GridMap, query: Option<&PlanningQuery>) -> RgbImage {
    let mut img = RgbImage::from_fn(map.width() as u32, map.height() as u32, |x, y| {
        if map.cell_is_free(x as usize, y as usize) {
            COLOR_FREE
        } else {
            COLOR_OBSTACLE
        }
    });
    if let Some(q) = query {
        paint_disks(&mut img, map, q);
    }
    img
}

/// Paints the start and goal disks onto the free cells of `img`.
pub fn paint_disks(img: &mut RgbImage, map: &GridMap, q: &PlanningQuery) {
    for (center, color) in [(q.start, COLOR_START), (q.goal, COLOR_GOAL)] {
        for (cx, cy) in disk_cells(map.width(), map.height(), center) {
            if map.cell_is_free(cx, cy) {
                img.put_pixel(cx as u32, cy as u32, color);
            }
        }
    }
}

pub fn encode_rgb_png(img: &RgbImage) -> Result<Vec<u8>, GridError> {
    let mut out = Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)
        .map_err(|e| GridError::Encode(e.to_string()))?;
    Ok(out.into_inner())
}

/// Encodes a map as an 8-bit RGB PNG.
pub fn encode_map_image(map: &GridMap, query: Option<&PlanningQuery>) -> Result<Vec<u8>, GridError> {
    encode_rgb_png(&render_map_rgb(map, query))
}

/// Result of decoding a map image.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodedMap {
    pub map: GridMap,
    pub query: Option<PlanningQuery>,
}

/// Decodes a PNG produced by [`encode_map_image`], or a ground-truth image
/// with a green path overlay.
pub fn decode_map_image(bytes: &[u8]) -> Result<DecodedMap, GridError> {
    let img = image::load_from_memory(bytes).map_err(|e| GridError::Decode(e.to_string()))?;
    decode_map_rgb(&img.to_rgb8())
}

pub fn decode_map_rgb(img: &RgbImage) -> Result<DecodedMap, GridError> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut occupied = Vec::with_capacity(w * h);
    let mut start = Centroid::default();
    let mut goal = Centroid::default();
    for (x, y, px) in img.enumerate_pixels() {
        let obstacle = match *px {
            COLOR_OBSTACLE => true,
            COLOR_FREE | COLOR_PATH_REGION => false,
            COLOR_START => {
                start.add(x, y);
                false
            }
            COLOR_GOAL => {
                goal.add(x, y);
                false
            }
            Rgb([r, g, b]) => return Err(GridError::UnknownColor { r, g, b, x, y }),
        };
        occupied.push(obstacle);
    }
    let map = GridMap::from_cells(w, h, occupied, MapKind::Custom, 0)?;
    let query = match (start.mean(), goal.mean()) {
        (Some(s), Some(g)) => Some(PlanningQuery::new(&map, s, g, DEFAULT_GOAL_RADIUS)?),
        (None, None) => None,
        _ => {
            return Err(GridError::Decode(
                "image carries only one of the start/goal disks".into(),
            ))
        }
    };
    Ok(DecodedMap { map, query })
}

#[derive(Default)]
struct Centroid {
    sx: f64,
    sy: f64,
    n: usize,
}

impl Centroid {
    fn add(&mut self, x: u32, y: u32) {
        self.sx += x as f64 + 0.5;
        self.sy += y as f64 + 0.5;
        self.n += 1;
    }

    fn mean(&self) -> Option<WorldPoint> {
        (self.n > 0).then(|| WorldPoint::new(self.sx / self.n as f64, self.sy / self.n as f64))
    }
}
