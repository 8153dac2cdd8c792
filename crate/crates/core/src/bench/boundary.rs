//! Boundary chains, mesh extent and collision-free boundary displacements.

use std::collections::HashMap;

use rand::{Rng, RngExt};

use crate::pbd::Mesh;
use crate::trigeom::Orientation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundaryError {
    #[error("mesh has no boundary edges")]
    NoBoundary,
    #[error("boundary vertex {0} is not on a simple loop")]
    NonManifold(usize),
    #[error("group count must be at least 1")]
    ZeroGroups,
    #[error("requested {requested} groups but the boundary has only {available} vertices")]
    TooManyGroups { requested: usize, available: usize },
}

/// Closed boundary loops, each traversed with the mesh interior on the left.
///
/// Loops are ordered by length (longest first); each starts at its vertex with
/// the sharpest turn, ties broken by the smallest index.
pub fn boundary_loops(mesh: &Mesh<f64>) -> Result<Vec<Vec<usize>>, BoundaryError> {
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    let mut directed = Vec::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let tri = match mesh.orientations.get(t) {
            Some(Orientation::Negative) => [tri[0], tri[2], tri[1]],
            _ => *tri,
        };
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
            directed.push((a, b));
        }
    }
    let mut next: HashMap<usize, usize> = HashMap::new();
    for (a, b) in directed {
        if count[&(a.min(b), a.max(b))] == 1 && next.insert(a, b).is_some() {
            return Err(BoundaryError::NonManifold(a));
        }
    }
    if next.is_empty() {
        return Err(BoundaryError::NoBoundary);
    }
    let mut starts: Vec<usize> = next.keys().copied().collect();
    starts.sort_unstable();
    let mut visited = vec![false; mesh.vertices.len()];
    let mut loops = Vec::new();
    for s in starts {
        if visited[s] {
            continue;
        }
        let mut chain = Vec::new();
        let mut v = s;
        loop {
            if visited[v] {
                return Err(BoundaryError::NonManifold(v));
            }
            visited[v] = true;
            chain.push(v);
            v = *next.get(&v).ok_or(BoundaryError::NonManifold(v))?;
            if v == s {
                break;
            }
        }
        loops.push(rotate_to_sharpest(mesh, chain));
    }
    loops.sort_by(|a, b| b.len().cmp(&a.len()).then(a.iter().min().cmp(&b.iter().min())));
    Ok(loops)
}

fn turn_angle(p: [f64; 2], v: [f64; 2], n: [f64; 2]) -> f64 {
    let (ax, ay) = (v[0] - p[0], v[1] - p[1]);
    let (bx, by) = (n[0] - v[0], n[1] - v[1]);
    (ax * by - ay * bx).atan2(ax * bx + ay * by).abs()
}

fn rotate_to_sharpest(mesh: &Mesh<f64>, mut chain: Vec<usize>) -> Vec<usize> {
    let n = chain.len();
    let mut best: Option<(f64, usize, usize)> = None;
    for k in 0..n {
        let p = mesh.vertices[chain[(k + n - 1) % n]];
        let v = mesh.vertices[chain[k]];
        let q = mesh.vertices[chain[(k + 1) % n]];
        let a = turn_angle(p, v, q);
        let better = match best {
            None => true,
            Some((ba, bv, _)) => a > ba + 1e-9 || ((a - ba).abs() <= 1e-9 && chain[k] < bv),
        };
        if better {
            best = Some((a, chain[k], k));
        }
    }
    if let Some((_, _, k)) = best {
        chain.rotate_left(k);
    }
    chain
}

/// Splits the boundary into `group_count` contiguous, disjoint vertex chains covering every boundary vertex.
///
/// Groups are spread over the loops in proportion to their length, at least
/// one per loop; with fewer groups than loops, the shortest loops share the last group.
pub fn extract_boundary_groups(mesh: &Mesh<f64>, group_count: usize) -> Result<Vec<Vec<usize>>, BoundaryError> {
    if group_count == 0 {
        return Err(BoundaryError::ZeroGroups);
    }
    let loops = boundary_loops(mesh)?;
    let total: usize = loops.iter().map(Vec::len).sum();
    if group_count > total {
        return Err(BoundaryError::TooManyGroups { requested: group_count, available: total });
    }
    if group_count < loops.len() {
        let mut groups: Vec<Vec<usize>> = loops[..group_count - 1].to_vec();
        groups.push(loops[group_count - 1..].concat());
        return Ok(groups);
    }
    let mut counts: Vec<usize> = loops
        .iter()
        .map(|l| ((group_count * l.len()) / total).clamp(1, l.len()))
        .collect();
    while counts.iter().sum::<usize>() < group_count {
        let k = (0..loops.len())
            .filter(|&k| counts[k] < loops[k].len())
            .max_by(|&a, &b| {
                let ra = loops[a].len() as f64 / counts[a] as f64;
                let rb = loops[b].len() as f64 / counts[b] as f64;
                ra.total_cmp(&rb).then(b.cmp(&a))
            })
            .expect("group count bounded by boundary size");
        counts[k] += 1;
    }
    while counts.iter().sum::<usize>() > group_count {
        let k = (0..loops.len())
            .filter(|&k| counts[k] > 1)
            .min_by(|&a, &b| {
                let ra = loops[a].len() as f64 / counts[a] as f64;
                let rb = loops[b].len() as f64 / counts[b] as f64;
                ra.total_cmp(&rb).then(a.cmp(&b))
            })
            .expect("at least one group per loop");
        counts[k] -= 1;
    }
    let mut groups = Vec::with_capacity(group_count);
    for (l, &c) in loops.iter().zip(&counts) {
        for k in 0..c {
            groups.push(l[k * l.len() / c..(k + 1) * l.len() / c].to_vec());
        }
    }
    Ok(groups)
}

/// Chi-square 95% quantile with two degrees of freedom.
pub const CHI2_95_2DOF: f64 = 5.991;

/// Length of the major axis of the 95% confidence ellipse of the vertices, `2·√(5.991·λ_max)`.
///
/// Falls back to the bounding-box diagonal when the covariance vanishes.
pub fn max_extent(mesh: &Mesh<f64>) -> f64 {
    point_extent(&mesh.vertices)
}

pub fn point_extent(points: &[[f64; 2]]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let (sxx, sxy, syy) = (sxx / n, sxy / n, syy / n);
    let lambda = (sxx + syy) / 2.0 + (((sxx - syy) / 2.0).powi(2) + sxy * sxy).sqrt();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let diag = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
    if lambda.is_finite() && lambda > f64::EPSILON * diag * diag {
        2.0 * (CHI2_95_2DOF * lambda).sqrt()
    } else if diag.is_finite() {
        diag
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    pub group: usize,
    pub translation: [f64; 2],
    /// Candidates drawn, including the accepted one.
    pub attempts: usize,
}

impl Deformation {
    pub fn rejections(&self) -> usize {
        self.attempts - 1
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeformError {
    #[error("mesh has no boundary groups")]
    NoGroups,
    #[error("deformation fraction must be non-negative and finite, got {0}")]
    Fraction(f64),
    #[error("mesh extent is zero")]
    ZeroExtent,
    #[error("every one of {0} sampled displacements caused a boundary self-intersection")]
    Rejected(usize),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}

pub const MAX_DEFORM_ATTEMPTS: usize = 64;

/// Random translation of one boundary group by `fraction·D` in a random direction
/// that keeps the boundary free of self-intersections.
pub fn sample_deformation<R: Rng + ?Sized>(mesh: &Mesh<f64>, fraction: f64, rng: &mut R) -> Result<Deformation, DeformError> {
    if !(fraction >= 0.0 && fraction.is_finite()) {
        return Err(DeformError::Fraction(fraction));
    }
    if mesh.boundary_groups.is_empty() {
        return Err(DeformError::NoGroups);
    }
    let d = max_extent(mesh);
    if !(d > 0.0) {
        return Err(DeformError::ZeroExtent);
    }
    let loops = boundary_loops(mesh)?;
    let segments: Vec<(usize, usize)> = loops
        .iter()
        .flat_map(|l| (0..l.len()).map(move |k| (l[k], l[(k + 1) % l.len()])))
        .collect();
    let magnitude = fraction * d;
    for attempt in 1..=MAX_DEFORM_ATTEMPTS {
        let group = rng.random_range(0..mesh.boundary_groups.len());
        let theta = rng.random::<f64>() * std::f64::consts::TAU;
        let translation = [magnitude * theta.cos(), magnitude * theta.sin()];
        if magnitude == 0.0 || !self_intersects(mesh, &segments, &mesh.boundary_groups[group], translation) {
            return Ok(Deformation { group, translation, attempts: attempt });
        }
    }
    Err(DeformError::Rejected(MAX_DEFORM_ATTEMPTS))
}

/// Applies `d` to `mesh`: translates the group and pins it.
pub fn apply_deformation(mesh: &mut Mesh<f64>, d: &Deformation) {
    for &i in &mesh.boundary_groups[d.group] {
        mesh.vertices[i][0] += d.translation[0];
        mesh.vertices[i][1] += d.translation[1];
        mesh.pinned[i] = true;
    }
}

fn self_intersects(mesh: &Mesh<f64>, segments: &[(usize, usize)], group: &[usize], t: [f64; 2]) -> bool {
    let mut moved = vec![false; mesh.vertices.len()];
    for &i in group {
        moved[i] = true;
    }
    let pos = |i: usize| {
        let p = mesh.vertices[i];
        if moved[i] {
            [p[0] + t[0], p[1] + t[1]]
        } else {
            p
        }
    };
    for (k, &(a, b)) in segments.iter().enumerate() {
        if !(moved[a] || moved[b]) {
            continue;
        }
        for (j, &(c, d)) in segments.iter().enumerate() {
            if j == k || a == c || a == d || b == c || b == d {
                continue;
            }
            if (moved[c] || moved[d]) && j < k {
                continue;
            }
            if segments_intersect(pos(a), pos(b), pos(c), pos(d)) {
                return true;
            }
        }
    }
    false
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection test; touching counts.
pub fn segments_intersect(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}
