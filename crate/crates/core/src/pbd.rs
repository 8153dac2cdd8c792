//! Area-preserving relaxation of 2D triangle meshes, one triangle constraint at a time.
//!
//! `relax_opt` replaces each triangle by its nearest triangle with the
//! prescribed signed area; `relax_lin` takes the first-order constraint step
//! instead. Both sweep triangles in index order and write back immediately.

use serde::{Deserialize, Serialize};

use crate::project_fixed::project_with_fixed;
use crate::scalar::Scalar;
use crate::trigeom::{signed_area, Orientation, ProjectionSpec, TriangleCoords};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    #[error("triangle {triangle} references vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfRange { triangle: usize, index: usize, count: usize },
    #[error("triangle {0} repeats a vertex")]
    RepeatedVertex(usize),
    #[error("{field} has {got} entries, expected {expected}")]
    LengthMismatch { field: &'static str, got: usize, expected: usize },
    #[error("triangle {0} has a non-positive prescribed area")]
    NonPositiveArea(usize),
    #[error("triangle {0} is degenerate, so its orientation is undefined")]
    Degenerate(usize),
    #[error("boundary group {group} references vertex {index} out of range")]
    GroupIndex { group: usize, index: usize },
    #[error("vertex {0} belongs to more than one boundary group")]
    OverlappingGroups(usize),
    #[error("mesh has non-finite vertex coordinates")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh<T> {
    pub vertices: Vec<[T; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub prescribed_areas: Vec<T>,
    pub orientations: Vec<Orientation>,
    pub pinned: Vec<bool>,
    pub boundary_groups: Vec<Vec<usize>>,
}

impl<T: Scalar> Mesh<T> {
    /// Mesh whose prescribed areas and orientations are taken from the current geometry.
    pub fn from_geometry(vertices: Vec<[T; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        let n = vertices.len();
        let mut mesh = Mesh {
            vertices,
            triangles,
            prescribed_areas: Vec::new(),
            orientations: Vec::new(),
            pinned: vec![false; n],
            boundary_groups: Vec::new(),
        };
        mesh.check_indices()?;
        for i in 0..mesh.triangles.len() {
            let a = signed_area(&mesh.triangle(i));
            if a == T::zero() {
                return Err(MeshError::Degenerate(i));
            }
            mesh.prescribed_areas.push(a.abs());
            mesh.orientations.push(if a < T::zero() { Orientation::Negative } else { Orientation::Positive });
        }
        Ok(mesh)
    }

    fn check_indices(&self) -> Result<(), MeshError> {
        let n = self.vertices.len();
        for (t, tri) in self.triangles.iter().enumerate() {
            for &i in tri {
                if i >= n {
                    return Err(MeshError::IndexOutOfRange { triangle: t, index: i, count: n });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::RepeatedVertex(t));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), MeshError> {
        let (nv, nt) = (self.vertices.len(), self.triangles.len());
        let lens = [
            ("prescribed_areas", self.prescribed_areas.len(), nt),
            ("orientations", self.orientations.len(), nt),
            ("pinned", self.pinned.len(), nv),
        ];
        for (field, got, expected) in lens {
            if got != expected {
                return Err(MeshError::LengthMismatch { field, got, expected });
            }
        }
        if self.vertices.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(MeshError::NonFinite);
        }
        self.check_indices()?;
        if let Some(i) = self.prescribed_areas.iter().position(|a| !(*a > T::zero())) {
            return Err(MeshError::NonPositiveArea(i));
        }
        let mut seen = vec![false; nv];
        for (g, group) in self.boundary_groups.iter().enumerate() {
            for &i in group {
                if i >= nv {
                    return Err(MeshError::GroupIndex { group: g, index: i });
                }
                if seen[i] {
                    return Err(MeshError::OverlappingGroups(i));
                }
                seen[i] = true;
            }
        }
        Ok(())
    }

    pub fn triangle(&self, t: usize) -> TriangleCoords<T> {
        let [a, b, c] = self.triangles[t];
        TriangleCoords::from_vertices(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn signed_areas(&self) -> Vec<T> {
        (0..self.triangles.len()).map(|t| signed_area(&self.triangle(t))).collect()
    }

    /// Mean of `|s·A*(t) − A_o|` over triangles.
    pub fn mean_area_deviation(&self) -> T {
        if self.triangles.is_empty() {
            return T::zero();
        }
        let total = (0..self.triangles.len()).fold(T::zero(), |acc, t| acc + self.area_error(t).abs());
        total / T::lit(self.triangles.len() as f64)
    }

    /// Largest `|s·A*(t) − A_o|` over triangles.
    pub fn max_area_deviation(&self) -> T {
        (0..self.triangles.len()).fold(T::zero(), |m, t| m.max(self.area_error(t).abs()))
    }

    /// `s·A*(t) − A_o` for triangle `t`.
    pub fn area_error(&self, t: usize) -> T {
        self.orientations[t].sign::<T>() * signed_area(&self.triangle(t)) - self.prescribed_areas[t]
    }

    /// Whether every triangle still has its reference orientation.
    pub fn orientations_hold(&self) -> bool {
        (0..self.triangles.len()).all(|t| self.orientations[t].sign::<T>() * signed_area(&self.triangle(t)) > T::zero())
    }
}

/// Settings shared by both engines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxParams<T> {
    /// Stop once the mean vertex displacement of a sweep falls below this.
    pub threshold: T,
    pub max_iters: usize,
    /// Area tolerance handed to the projectors.
    pub tolerance: T,
    /// Fraction of the linearised correction applied per constraint (linear engine only).
    pub stiffness: T,
}

pub const DEFAULT_LIN_STIFFNESS: f64 = 0.5;

impl<T: Scalar> RelaxParams<T> {
    pub fn new(threshold: T, max_iters: usize, tolerance: T) -> Self {
        Self { threshold, max_iters, tolerance, stiffness: T::lit(DEFAULT_LIN_STIFFNESS) }
    }

    pub fn with_stiffness(mut self, stiffness: T) -> Self {
        self.stiffness = stiffness;
        self
    }
}

/// Per-iteration history of a relaxation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RelaxTrace<T> {
    /// Mean vertex displacement of each sweep.
    pub displacement: Vec<T>,
    /// Mean `|area − prescribed|` after each sweep.
    pub area_difference: Vec<T>,
    /// Squared distance of all coordinates from the starting configuration after each sweep.
    pub cost: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Scalar> RelaxTrace<T> {
    /// First (1-based) iteration whose displacement is below `threshold`.
    pub fn first_below(&self, threshold: T) -> Option<usize> {
        self.displacement.iter().position(|d| *d < threshold).map(|i| i + 1)
    }
}

/// Mean Euclidean distance between corresponding vertices.
pub fn convergence_metric<T: Scalar>(before: &[[T; 2]], after: &[[T; 2]]) -> T {
    assert_eq!(before.len(), after.len(), "vertex arrays differ in length");
    if before.is_empty() {
        return T::zero();
    }
    let total = before
        .iter()
        .zip(after)
        .fold(T::zero(), |acc, (p, q)| acc + (p[0] - q[0]).hypot(p[1] - q[1]));
    total / T::lit(before.len() as f64)
}

fn relax<T: Scalar, F>(mesh: &mut Mesh<T>, params: &RelaxParams<T>, mut sweep: F) -> RelaxTrace<T>
where
    F: FnMut(&mut Mesh<T>),
{
    assert!(params.max_iters >= 1, "max_iters must be at least 1");
    let start = mesh.vertices.clone();
    let mut trace = RelaxTrace::default();
    for _ in 0..params.max_iters {
        let before = mesh.vertices.clone();
        sweep(mesh);
        let d = convergence_metric(&before, &mesh.vertices);
        trace.displacement.push(d);
        trace.area_difference.push(mesh.mean_area_deviation());
        trace.cost.push(
            start
                .iter()
                .zip(&mesh.vertices)
                .fold(T::zero(), |acc, (p, q)| acc + (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)),
        );
        trace.iterations += 1;
        if d < params.threshold {
            trace.converged = true;
            break;
        }
    }
    trace
}

/// One Gauss–Seidel sweep of nearest-triangle projections.
pub fn sweep_opt<T: Scalar>(mesh: &mut Mesh<T>, tolerance: T) {
    for t in 0..mesh.triangles.len() {
        let idx = mesh.triangles[t];
        let fixed = idx.map(|i| mesh.pinned[i]);
        if fixed.iter().all(|&f| f) {
            continue;
        }
        let spec = match ProjectionSpec::new(mesh.prescribed_areas[t], mesh.orientations[t], tolerance) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let input = mesh.triangle(t);
        let Ok(result) = project_with_fixed(&input, fixed, &spec) else {
            continue;
        };
        if !result.optimal.is_finite() {
            continue;
        }
        for (k, &i) in idx.iter().enumerate() {
            if !fixed[k] {
                mesh.vertices[i] = result.optimal.vertex(k);
            }
        }
    }
}

/// One Gauss–Seidel sweep of linearised constraint steps.
pub fn sweep_lin<T: Scalar>(mesh: &mut Mesh<T>, stiffness: T) {
    let half = T::lit(0.5);
    for t in 0..mesh.triangles.len() {
        let idx = mesh.triangles[t];
        let fixed = idx.map(|i| mesh.pinned[i]);
        if fixed.iter().all(|&f| f) {
            continue;
        }
        let s = mesh.orientations[t].sign::<T>();
        let [xa, ya, xb, yb, xc, yc] = mesh.triangle(t).0;
        let c = s * signed_area(&TriangleCoords([xa, ya, xb, yb, xc, yc])) - mesh.prescribed_areas[t];
        let grads = [
            [s * half * (yb - yc), s * half * (xc - xb)],
            [s * half * (yc - ya), s * half * (xa - xc)],
            [s * half * (ya - yb), s * half * (xb - xa)],
        ];
        let denom = (0..3)
            .filter(|&k| !fixed[k])
            .fold(T::zero(), |acc, k| acc + grads[k][0] * grads[k][0] + grads[k][1] * grads[k][1]);
        if !(denom > T::epsilon() * T::epsilon()) {
            continue;
        }
        let scale = stiffness * c / denom;
        for k in 0..3 {
            if !fixed[k] {
                let p = &mut mesh.vertices[idx[k]];
                p[0] = p[0] - scale * grads[k][0];
                p[1] = p[1] - scale * grads[k][1];
            }
        }
    }
}

/// Relaxation with the closed-form projector; dispatches on each triangle's pinned count.
pub fn relax_opt<T: Scalar>(mesh: &mut Mesh<T>, params: &RelaxParams<T>) -> RelaxTrace<T> {
    let tol = params.tolerance;
    relax(mesh, params, |m| sweep_opt(m, tol))
}

/// Relaxation with the linearised constraint step `Δvᵢ = −k·C·∇ᵢC / Σⱼ‖∇ⱼC‖²`.
pub fn relax_lin<T: Scalar>(mesh: &mut Mesh<T>, params: &RelaxParams<T>) -> RelaxTrace<T> {
    let k = params.stiffness;
    relax(mesh, params, |m| sweep_lin(m, k))
}
