//! Exact shortest paths among axis-aligned rectangles via a visibility graph.
//!
//! Obstacles are closed boxes in continuous cell coordinates. A segment is
//! blocked only when it passes through a box's open interior, so paths may
//! slide along edges and turn at corners. Graph nodes are the start, the goal
//! and every box corner; Dijkstra gives the geodesic distance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Clone, Copy, Debug)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn cells(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        Rect {
            x0: x0 as f64,
            y0: y0 as f64,
            x1: x1 as f64,
            y1: y1 as f64,
        }
    }

    fn corners(&self) -> [(f64, f64); 4] {
        [(self.x0, self.y0), (self.x1, self.y0), (self.x0, self.y1), (self.x1, self.y1)]
    }

    fn strictly_contains(&self, p: (f64, f64)) -> bool {
        p.0 > self.x0 && p.0 < self.x1 && p.1 > self.y0 && p.1 < self.y1
    }

    /// Liang-Barsky clip of p->q against the closed box, then a strict
    /// interior test of the clipped piece's midpoint.
    pub fn blocks(&self, p: (f64, f64), q: (f64, f64)) -> bool {
        let (dx, dy) = (q.0 - p.0, q.1 - p.1);
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for (den, num) in [
            (-dx, p.0 - self.x0),
            (dx, self.x1 - p.0),
            (-dy, p.1 - self.y0),
            (dy, self.y1 - p.1),
        ] {
            if den == 0.0 {
                if num < 0.0 {
                    return false;
                }
            } else {
                let t = num / den;
                if den < 0.0 {
                    t0 = t0.max(t);
                } else {
                    t1 = t1.min(t);
                }
            }
        }
        if t0 >= t1 {
            return false;
        }
        let tm = 0.5 * (t0 + t1);
        self.strictly_contains((p.0 + tm * dx, p.1 + tm * dy))
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

#[derive(PartialEq)]
struct State(f64, usize);

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Geodesic distance from `start` to `goal` plus the polyline achieving it.
pub fn shortest_path(
    rects: &[Rect],
    start: (f64, f64),
    goal: (f64, f64),
) -> Option<(f64, Vec<(f64, f64)>)> {
    let mut nodes = vec![start, goal];
    for r in rects {
        for c in r.corners() {
            if !rects.iter().any(|o| o.strictly_contains(c)) {
                nodes.push(c);
            }
        }
    }
    let visible = |a: (f64, f64), b: (f64, f64)| !rects.iter().any(|r| r.blocks(a, b));
    let n = nodes.len();
    let mut best = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut heap = BinaryHeap::from([State(0.0, 0)]);
    best[0] = 0.0;
    while let Some(State(d, u)) = heap.pop() {
        if d > best[u] {
            continue;
        }
        if u == 1 {
            break;
        }
        for v in 0..n {
            if v == u {
                continue;
            }
            let nd = d + dist(nodes[u], nodes[v]);
            if nd < best[v] && visible(nodes[u], nodes[v]) {
                best[v] = nd;
                prev[v] = u;
                heap.push(State(nd, v));
            }
        }
    }
    if !best[1].is_finite() {
        return None;
    }
    let mut path = vec![nodes[1]];
    let mut at = 1;
    while at != 0 {
        at = prev[at];
        path.push(nodes[at]);
    }
    path.reverse();
    Some((best[1], path))
}

/// Shortest length from `start` to any point of the goal disk, assuming the
/// disk is obstacle-free. Returns `None` unless the geodesic's final leg is
/// at least `radius` long, in which case the answer is `geodesic - radius`.
pub fn shortest_to_disk(
    rects: &[Rect],
    start: (f64, f64),
    goal: (f64, f64),
    radius: f64,
) -> Option<f64> {
    let (len, path) = shortest_path(rects, start, goal)?;
    let last = dist(path[path.len() - 2], path[path.len() - 1]);
    (last >= radius).then_some(len - radius)
}
