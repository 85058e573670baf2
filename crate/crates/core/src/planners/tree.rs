use crate::gridworld::WorldPoint;

/// One tree node. `cost` is the path length from the root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub point: WorldPoint,
    pub parent: Option<usize>,
    pub cost: f64,
}

/// Rooted search tree. Vertex 0 is the root; edges are implied by parents.
///
/// A uniform bucket grid accelerates [`Tree::nearest`] and [`Tree::near`];
/// results are identical to a linear scan, ties going to the lowest index.
#[derive(Clone, Debug)]
pub struct Tree {
    vertices: Vec<Vertex>,
    children: Vec<Vec<usize>>,
    buckets: BucketGrid,
}

impl Tree {
    /// A tree holding only `root`, indexing points over `[0, width) x [0, height)`
    /// with square buckets of side `bucket_size`. Points outside the extent
    /// are still handled correctly, only less efficiently.
    pub fn new(root: WorldPoint, width: f64, height: f64, bucket_size: f64) -> Self {
        let mut buckets = BucketGrid::new(width, height, bucket_size);
        buckets.insert(root, 0);
        Self {
            vertices: vec![Vertex {
                point: root,
                parent: None,
                cost: 0.0,
            }],
            children: vec![Vec::new()],
            buckets,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.parent.is_some()).count()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn point(&self, i: usize) -> WorldPoint {
        self.vertices[i].point
    }

    pub fn cost(&self, i: usize) -> f64 {
        self.vertices[i].cost
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// Appends `point` as a child of `parent`; returns its index.
    pub fn add(&mut self, point: WorldPoint, parent: usize) -> usize {
        let idx = self.vertices.len();
        let cost = self.vertices[parent].cost + self.vertices[parent].point.distance(point);
        self.vertices.push(Vertex {
            point,
            parent: Some(parent),
            cost,
        });
        self.children.push(Vec::new());
        self.children[parent].push(idx);
        self.buckets.insert(point, idx);
        idx
    }

    /// Moves `v` under `new_parent` and recomputes the costs of its subtree.
    ///
    /// The caller must ensure `new_parent` is not a descendant of `v`.
    pub fn reparent(&mut self, v: usize, new_parent: usize) {
        let old = self.vertices[v].parent.expect("root cannot be reparented");
        if let Some(pos) = self.children[old].iter().position(|&c| c == v) {
            self.children[old].swap_remove(pos);
        }
        self.children[new_parent].push(v);
        self.vertices[v].parent = Some(new_parent);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let p = self.vertices[u].parent.unwrap();
            self.vertices[u].cost =
                self.vertices[p].cost + self.vertices[p].point.distance(self.vertices[u].point);
            stack.extend_from_slice(&self.children[u]);
        }
    }

    /// Index of the vertex closest to `x`, lowest index on ties.
    pub fn nearest(&self, x: WorldPoint) -> usize {
        self.buckets
            .nearest(x, &self.vertices)
            .expect("tree always holds its root")
    }

    /// All vertices within `radius` of `x` (inclusive), ascending index order.
    pub fn near(&self, x: WorldPoint, radius: f64) -> Vec<usize> {
        let mut out = self.buckets.within(x, radius, &self.vertices);
        out.sort_unstable();
        out
    }

    /// Points from the root to `v`.
    pub fn path_to(&self, v: usize) -> Vec<WorldPoint> {
        let mut pts = Vec::new();
        let mut cur = Some(v);
        while let Some(i) = cur {
            pts.push(self.vertices[i].point);
            cur = self.vertices[i].parent;
        }
        pts.reverse();
        pts
    }

    /// Checks root, acyclicity, edge count and cost coherence within `tol`.
    pub fn check_invariants(&self, tol: f64) -> Result<(), String> {
        let root = &self.vertices[0];
        if root.parent.is_some() || root.cost != 0.0 {
            return Err("root must have no parent and zero cost".into());
        }
        if self.edge_count() != self.len() - 1 {
            return Err(format!(
                "{} edges for {} vertices",
                self.edge_count(),
                self.len()
            ));
        }
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            let p = v.parent.ok_or_else(|| format!("vertex {i} has no parent"))?;
            let expect = self.vertices[p].cost + self.vertices[p].point.distance(v.point);
            if (expect - v.cost).abs() > tol {
                return Err(format!(
                    "vertex {i}: cost {} but parent chain gives {expect}",
                    v.cost
                ));
            }
            let mut steps = 0;
            let mut cur = i;
            while let Some(p) = self.vertices[cur].parent {
                cur = p;
                steps += 1;
                if steps > self.len() {
                    return Err(format!("cycle through vertex {i}"));
                }
            }
            if cur != 0 {
                return Err(format!("vertex {i} does not reach the root"));
            }
        }
        Ok(())
    }
}

/// Moves from `from` toward `to` by at most `step`.
pub fn steer(from: WorldPoint, to: WorldPoint, step: f64) -> WorldPoint {
    let d = from.distance(to);
    if d <= step {
        return to;
    }
    let s = step / d;
    WorldPoint::new(from.x + (to.x - from.x) * s, from.y + (to.y - from.y) * s)
}

#[derive(Clone, Debug)]
struct BucketGrid {
    size: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Vec<u32>>,
}

impl BucketGrid {
    fn new(width: f64, height: f64, size: f64) -> Self {
        let size = if size > 0.0 { size } else { 1.0 };
        let cols = ((width / size).ceil() as usize).max(1);
        let rows = ((height / size).ceil() as usize).max(1);
        Self {
            size,
            cols,
            rows,
            cells: vec![Vec::new(); cols * rows],
        }
    }

    fn coord(&self, v: f64, n: usize) -> usize {
        let b = (v / self.size).floor();
        if b.is_nan() || b < 0.0 {
            0
        } else {
            (b as usize).min(n - 1)
        }
    }

    fn bucket_of(&self, p: WorldPoint) -> (usize, usize) {
        (self.coord(p.x, self.cols), self.coord(p.y, self.rows))
    }

    fn insert(&mut self, p: WorldPoint, idx: usize) {
        let (bx, by) = self.bucket_of(p);
        self.cells[by * self.cols + bx].push(idx as u32);
    }

    fn nearest(&self, x: WorldPoint, vertices: &[Vertex]) -> Option<usize> {
        let (bx, by) = self.bucket_of(x);
        let (bx, by) = (bx as isize, by as isize);
        let max_ring = self.cols.max(self.rows) as isize;
        let mut best: Option<(f64, usize)> = None;
        for ring in 0..=max_ring {
            for (cx, cy) in ring_cells(bx, by, ring) {
                if cx < 0 || cy < 0 || cx >= self.cols as isize || cy >= self.rows as isize {
                    continue;
                }
                for &i in &self.cells[cy as usize * self.cols + cx as usize] {
                    let i = i as usize;
                    let d = vertices[i].point.distance_squared(x);
                    let better = match best {
                        None => true,
                        Some((bd, bi)) => d < bd || (d == bd && i < bi),
                    };
                    if better {
                        best = Some((d, i));
                    }
                }
            }
            // Every unvisited bucket is at least `ring * size` away.
            if let Some((bd, _)) = best {
                let reach = ring as f64 * self.size;
                if bd < reach * reach {
                    break;
                }
            }
        }
        best.map(|(_, i)| i)
    }

    fn within(&self, x: WorldPoint, radius: f64, vertices: &[Vertex]) -> Vec<usize> {
        let r2 = radius * radius;
        let x0 = self.coord(x.x - radius, self.cols);
        let x1 = self.coord(x.x + radius, self.cols);
        let y0 = self.coord(x.y - radius, self.rows);
        let y1 = self.coord(x.y + radius, self.rows);
        let mut out = Vec::new();
        for cy in y0..=y1 {
            for cx in x0..=x1 {
                for &i in &self.cells[cy * self.cols + cx] {
                    if vertices[i as usize].point.distance_squared(x) <= r2 {
                        out.push(i as usize);
                    }
                }
            }
        }
        out
    }
}

/// Bucket coordinates at Chebyshev distance exactly `ring` from `(bx, by)`.
fn ring_cells(bx: isize, by: isize, ring: isize) -> impl Iterator<Item = (isize, isize)> {
    let span = -ring..=ring;
    span.clone().flat_map(move |dy| {
        let edge_row = dy.abs() == ring;
        let dxs: Vec<isize> = if edge_row {
            (-ring..=ring).collect()
        } else {
            vec![-ring, ring]
        };
        dxs.into_iter().map(move |dx| (bx + dx, by + dy))
    })
}
