//! Nearest triangle with a prescribed (signed) area, solved in closed form,
//! plus position-based relaxation of 2D triangle meshes built on top of it.

pub mod bench;
pub mod pbd;
pub mod poly;
pub mod project_fixed;
pub mod project_free;
pub mod scalar;
pub mod trigeom;

pub use scalar::Scalar;

pub type Triangle = trigeom::TriangleCoords<f64>;
pub type Triangle32 = trigeom::TriangleCoords<f32>;
pub type Spec = trigeom::ProjectionSpec<f64>;
pub type Outcome = project_free::ProjectionOutcome<f64>;
pub type Mesh = pbd::Mesh<f64>;
