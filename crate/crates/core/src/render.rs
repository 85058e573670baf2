//! PNG renders of trees, paths and heatmaps over a map.

use image::{Rgb, RgbImage};

use crate::gridworld::{paint_disks, render_map_rgb, GridMap, PlanningQuery, WorldPoint};
use crate::planners::Tree;
use crate::sampling::Heatmap;

pub const COLOR_PATH: Rgb<u8> = Rgb([186, 85, 211]);
pub const COLOR_TREE: Rgb<u8> = Rgb([150, 150, 150]);

/// Draws a segment by dense sampling, clipped to the image.
pub fn draw_segment(img: &mut RgbImage, a: WorldPoint, b: WorldPoint, color: Rgb<u8>) {
    let steps = (a.distance(b) / 0.25).ceil().max(1.0) as usize;
    for i in 0..=steps {
        let t = i as f64 / steps as f64;
        let (x, y) = (a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
        if x >= 0.0 && y >= 0.0 && (x as u32) < img.width() && (y as u32) < img.height() {
            img.put_pixel(x as u32, y as u32, color);
        }
    }
}

/// Map with optional tree edges, path and start/goal disks (drawn last).
pub fn render_plan_rgb(
    map: &GridMap,
    query: Option<&PlanningQuery>,
    tree: Option<&Tree>,
    path: Option<&[WorldPoint]>,
) -> RgbImage {
    let mut img = render_map_rgb(map, None);
    if let Some(tree) = tree {
        for v in tree.vertices() {
            if let Some(p) = v.parent {
                draw_segment(&mut img, tree.point(p), v.point, COLOR_TREE);
            }
        }
    }
    if let Some(q) = query {
        paint_disks(&mut img, map, q);
    }
    if let Some(points) = path {
        for w in points.windows(2) {
            draw_segment(&mut img, w[0], w[1], COLOR_PATH);
        }
    }
    img
}

/// Map with free cells tinted green in proportion to heatmap weight.
///
/// A cell of weight `w` gets color `(255 - v, 255, 255 - v)` with
/// `v = round(255 * w / max)`, so the green filter reads `v` back.
pub fn render_heatmap_overlay(
    map: &GridMap,
    query: Option<&PlanningQuery>,
    heatmap: &Heatmap,
) -> RgbImage {
    let mut img = render_map_rgb(map, None);
    let max = heatmap.max_weight();
    for (i, &w) in heatmap.weights().iter().enumerate() {
        if w > 0.0 && !map.cells()[i] {
            let v = (255.0 * w / max).round().clamp(1.0, 255.0) as u8;
            let (x, y) = ((i % map.width()) as u32, (i / map.width()) as u32);
            img.put_pixel(x, y, Rgb([255 - v, 255, 255 - v]));
        }
    }
    if let Some(q) = query {
        paint_disks(&mut img, map, q);
    }
    img
}
