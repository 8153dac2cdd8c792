//! Planar shapes and a constrained-Delaunay mesher with near-uniform edge lengths.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use crate::pbd::Mesh;
use crate::trigeom::Orientation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Disk,
    Square,
    Ring,
    #[serde(rename = "l")]
    L,
    Cross,
    Star,
    Blob,
    Capsule,
}

impl Shape {
    pub const ALL: [Shape; 8] = [
        Shape::Disk,
        Shape::Square,
        Shape::Ring,
        Shape::L,
        Shape::Cross,
        Shape::Star,
        Shape::Blob,
        Shape::Capsule,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Disk => "disk",
            Shape::Square => "square",
            Shape::Ring => "ring",
            Shape::L => "l",
            Shape::Cross => "cross",
            Shape::Star => "star",
            Shape::Blob => "blob",
            Shape::Capsule => "capsule",
        }
    }

    /// Number of holes in the shape.
    pub fn holes(self) -> usize {
        usize::from(self == Shape::Ring)
    }

    pub fn region(self) -> Region {
        match self {
            Shape::Disk => Region::new(vec![Contour::smooth(circle([0.0, 0.0], 1.0, 512))]),
            Shape::Square => Region::new(vec![Contour::polygon(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])]),
            Shape::Ring => {
                let mut inner = circle([0.0, 0.0], 0.45, 256);
                inner.reverse();
                Region::new(vec![Contour::smooth(circle([0.0, 0.0], 1.0, 512)), Contour::smooth(inner)])
            }
            Shape::L => Region::new(vec![Contour::polygon(vec![
                [0.0, 0.0],
                [2.0, 0.0],
                [2.0, 1.0],
                [1.0, 1.0],
                [1.0, 2.0],
                [0.0, 2.0],
            ])]),
            Shape::Cross => {
                let (a, b) = (0.35, 1.0);
                Region::new(vec![Contour::polygon(vec![
                    [a, -b],
                    [a, -a],
                    [b, -a],
                    [b, a],
                    [a, a],
                    [a, b],
                    [-a, b],
                    [-a, a],
                    [-b, a],
                    [-b, -a],
                    [-a, -a],
                    [-a, -b],
                ])])
            }
            Shape::Star => {
                let pts = (0..10)
                    .map(|k| {
                        let r = if k % 2 == 0 { 1.0 } else { 0.45 };
                        let t = PI / 2.0 + k as f64 * PI / 5.0;
                        [r * t.cos(), r * t.sin()]
                    })
                    .collect();
                Region::new(vec![Contour::polygon(pts)])
            }
            Shape::Blob => {
                let n = 720;
                let pts = (0..n)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / n as f64;
                        let r = 1.0 + 0.22 * (3.0 * t).cos() + 0.1 * (5.0 * t + 0.7).sin();
                        [r * t.cos(), r * t.sin()]
                    })
                    .collect();
                Region::new(vec![Contour::smooth(pts)])
            }
            Shape::Capsule => {
                let (half, r, n) = (0.9, 0.5, 256);
                let mut pts = Vec::new();
                for k in 0..=n {
                    let t = -PI / 2.0 + PI * k as f64 / n as f64;
                    pts.push([half + r * t.cos(), r * t.sin()]);
                }
                for k in 0..=n {
                    let t = PI / 2.0 + PI * k as f64 / n as f64;
                    pts.push([-half + r * t.cos(), r * t.sin()]);
                }
                Region::new(vec![Contour::smooth(pts)])
            }
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown shape `{0}`")]
pub struct UnknownShape(pub String);

impl FromStr for Shape {
    type Err = UnknownShape;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Shape::ALL
            .into_iter()
            .find(|sh| sh.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownShape(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolutionClass {
    Coarse,
    Fine,
}

impl ResolutionClass {
    pub fn target_triangles(self) -> usize {
        match self {
            ResolutionClass::Coarse => 100,
            ResolutionClass::Fine => 1000,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ResolutionClass::Coarse => "coarse",
            ResolutionClass::Fine => "fine",
        }
    }
}

impl fmt::Display for ResolutionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown resolution class `{0}`")]
pub struct UnknownClass(pub String);

impl FromStr for ResolutionClass {
    type Err = UnknownClass;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "coarse" => Ok(ResolutionClass::Coarse),
            "fine" => Ok(ResolutionClass::Fine),
            _ => Err(UnknownClass(s.to_string())),
        }
    }
}

fn circle(c: [f64; 2], r: f64, n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            [c[0] + r * t.cos(), c[1] + r * t.sin()]
        })
        .collect()
}

/// Closed polyline; `corners` are indices that resampling must keep.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<[f64; 2]>,
    pub corners: Vec<usize>,
}

impl Contour {
    pub fn polygon(points: Vec<[f64; 2]>) -> Self {
        let corners = (0..points.len()).collect();
        Self { points, corners }
    }

    pub fn smooth(points: Vec<[f64; 2]>) -> Self {
        Self { points, corners: Vec::new() }
    }

    fn segment(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }

    /// Twice the signed area enclosed.
    fn area2(&self) -> f64 {
        (0..self.points.len())
            .map(|i| {
                let (p, q) = self.segment(i);
                p[0] * q[1] - q[0] * p[1]
            })
            .sum()
    }

    fn perimeter_from(&self, start: usize, end: usize) -> Vec<f64> {
        let n = self.points.len();
        let mut acc = vec![0.0];
        let mut i = start;
        loop {
            let (p, q) = self.segment(i);
            acc.push(acc.last().unwrap() + dist(p, q));
            i = (i + 1) % n;
            if i == end {
                break;
            }
        }
        acc
    }

    /// Points along the contour at spacing close to `h`, keeping every corner.
    pub fn resample(&self, h: f64) -> Vec<[f64; 2]> {
        let n = self.points.len();
        let pieces: Vec<(usize, usize)> = if self.corners.is_empty() {
            vec![(0, 0)]
        } else {
            let c = &self.corners;
            (0..c.len()).map(|k| (c[k], c[(k + 1) % c.len()])).collect()
        };
        let mut out = Vec::new();
        for (start, end) in pieces {
            let acc = self.perimeter_from(start, end);
            let len = *acc.last().unwrap();
            let min = if self.corners.is_empty() { 8 } else { 1 };
            let m = ((len / h).round() as usize).max(min);
            let mut seg = 0;
            for k in 0..m {
                let target = len * k as f64 / m as f64;
                while seg + 1 < acc.len() - 1 && acc[seg + 1] <= target {
                    seg += 1;
                }
                let (p, q) = self.segment((start + seg) % n);
                let span = acc[seg + 1] - acc[seg];
                let t = if span > 0.0 { (target - acc[seg]) / span } else { 0.0 };
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        out
    }
}

/// Outer contour (counter-clockwise) followed by holes (clockwise).
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub contours: Vec<Contour>,
}

impl Region {
    pub fn new(contours: Vec<Contour>) -> Self {
        Self { contours }
    }

    pub fn area(&self) -> f64 {
        self.contours.iter().map(Contour::area2).sum::<f64>() / 2.0
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let mut inside = false;
        for c in &self.contours {
            for i in 0..c.points.len() {
                let (a, b) = c.segment(i);
                if (a[1] > p[1]) != (b[1] > p[1]) {
                    let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                    if p[0] < x {
                        inside = !inside;
                    }
                }
            }
        }
        inside
    }

    pub fn boundary_distance(&self, p: [f64; 2]) -> f64 {
        let mut best = f64::INFINITY;
        for c in &self.contours {
            for i in 0..c.points.len() {
                let (a, b) = c.segment(i);
                best = best.min(point_segment_distance(p, a, b));
            }
        }
        best
    }

    fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in self.contours.iter().flat_map(|c| &c.points) {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    dist(p, [a[0] + t * dx, a[1] + t * dy])
}

fn area2(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Triangulates `region` with target edge length `h`.
pub fn mesh_region(region: &Region, h: f64) -> Mesh<f64> {
    let mut points = Vec::new();
    let mut loops = Vec::new();
    for c in &region.contours {
        let ring = c.resample(h);
        loops.push((points.len(), ring.len()));
        points.extend(ring);
    }
    let n_boundary = points.len();

    let (lo, hi) = region.bbox();
    let dy = h * 3f64.sqrt() / 2.0;
    let mut row = 0usize;
    let mut y = lo[1] + dy / 2.0;
    while y < hi[1] {
        let mut x = lo[0] + if row % 2 == 0 { h / 4.0 } else { 3.0 * h / 4.0 };
        while x < hi[0] {
            let p = [x, y];
            if region.contains(p) && region.boundary_distance(p) >= 0.6 * h {
                points.push(p);
            }
            x += h;
        }
        y += dy;
        row += 1;
    }

    let triangles = triangulate(region, &points, &loops);
    smooth_interior(&mut points, &triangles, n_boundary, 6);
    let triangles = triangulate(region, &points, &loops);

    let mut mesh = Mesh::from_geometry(points, triangles).expect("mesher produced a degenerate triangle");
    debug_assert!(mesh.orientations.iter().all(|o| *o == Orientation::Positive));
    mesh.pinned = vec![false; mesh.vertices.len()];
    mesh
}

fn triangulate(region: &Region, points: &[[f64; 2]], loops: &[(usize, usize)]) -> Vec<[usize; 3]> {
    let mut cdt: ConstrainedDelaunayTriangulation<Point2<f64>> = ConstrainedDelaunayTriangulation::new();
    let handles: Vec<_> = points
        .iter()
        .map(|p| cdt.insert(Point2::new(p[0], p[1])).expect("finite mesher point"))
        .collect();
    for &(start, len) in loops {
        for k in 0..len {
            let (a, b) = (handles[start + k], handles[start + (k + 1) % len]);
            cdt.try_add_constraint(a, b);
        }
    }
    let mut lookup = vec![usize::MAX; cdt.num_vertices()];
    for (i, h) in handles.iter().enumerate() {
        lookup[h.index()] = i;
    }
    let mut out = Vec::new();
    for face in cdt.inner_faces() {
        let idx = face.vertices().map(|v| lookup[v.fix().index()]);
        if idx.contains(&usize::MAX) {
            continue;
        }
        let [a, b, c] = idx.map(|i| points[i]);
        let g = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
        if !region.contains(g) {
            continue;
        }
        let s = area2(a, b, c);
        if s > 0.0 {
            out.push(idx);
        } else if s < 0.0 {
            out.push([idx[0], idx[2], idx[1]]);
        }
    }
    out
}

/// Laplacian smoothing of interior vertices; a move is kept only if no incident triangle flips or collapses.
fn smooth_interior(points: &mut [[f64; 2]], triangles: &[[usize; 3]], n_boundary: usize, passes: usize) {
    let n = points.len();
    let mut neighbours = vec![Vec::new(); n];
    let mut incident = vec![Vec::new(); n];
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            neighbours[a].push(b);
            neighbours[b].push(a);
            incident[tri[k]].push(t);
        }
    }
    for nb in &mut neighbours {
        nb.sort_unstable();
        nb.dedup();
    }
    for _ in 0..passes {
        for v in n_boundary..n {
            if neighbours[v].is_empty() {
                continue;
            }
            let m = neighbours[v].len() as f64;
            let target = neighbours[v]
                .iter()
                .fold([0.0, 0.0], |acc, &u| [acc[0] + points[u][0] / m, acc[1] + points[u][1] / m]);
            let old = points[v];
            let min_before = incident[v]
                .iter()
                .map(|&t| {
                    let [a, b, c] = triangles[t];
                    area2(points[a], points[b], points[c])
                })
                .fold(f64::INFINITY, f64::min);
            points[v] = target;
            let ok = incident[v].iter().all(|&t| {
                let [a, b, c] = triangles[t];
                area2(points[a], points[b], points[c]) > 0.2 * min_before.max(0.0)
            });
            if !ok {
                points[v] = old;
            }
        }
    }
}

/// Mesh of `shape` with about `class.target_triangles()` near-equilateral triangles.
pub fn generate_shape_mesh(shape: Shape, class: ResolutionClass) -> Mesh<f64> {
    let region = shape.region();
    let target = class.target_triangles() as f64;
    let mut h = (4.0 * region.area() / (3f64.sqrt() * target)).sqrt();
    let mut mesh = mesh_region(&region, h);
    for _ in 0..4 {
        let ratio = mesh.triangles.len() as f64 / target;
        if (ratio - 1.0).abs() <= 0.1 {
            break;
        }
        h *= ratio.sqrt();
        mesh = mesh_region(&region, h);
    }
    if let Ok(groups) = super::extract_boundary_groups(&mesh, super::DEFAULT_GROUP_COUNT) {
        mesh.boundary_groups = groups;
    }
    mesh
}
