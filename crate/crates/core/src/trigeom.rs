//! Triangle coordinates and the scalar measures used by the projectors.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Stacked vertex coordinates `[x_a, y_a, x_b, y_b, x_c, y_c]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TriangleCoords<T>(pub [T; 6]);

impl<T: Scalar> TriangleCoords<T> {
    pub fn new(coords: [T; 6]) -> Self {
        Self(coords)
    }

    pub fn from_vertices(a: [T; 2], b: [T; 2], c: [T; 2]) -> Self {
        Self([a[0], a[1], b[0], b[1], c[0], c[1]])
    }

    pub fn zeros() -> Self {
        Self([T::zero(); 6])
    }

    #[inline]
    pub fn vertex(&self, i: usize) -> [T; 2] {
        [self.0[2 * i], self.0[2 * i + 1]]
    }

    #[inline]
    pub fn set_vertex(&mut self, i: usize, p: [T; 2]) {
        self.0[2 * i] = p[0];
        self.0[2 * i + 1] = p[1];
    }

    pub fn vertices(&self) -> [[T; 2]; 3] {
        [self.vertex(0), self.vertex(1), self.vertex(2)]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn translated(&self, d: [T; 2]) -> Self {
        let mut out = *self;
        for i in 0..3 {
            out.0[2 * i] = out.0[2 * i] + d[0];
            out.0[2 * i + 1] = out.0[2 * i + 1] + d[1];
        }
        out
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn signed_area(&self) -> T {
        signed_area(self)
    }

    pub fn cast<U: Scalar>(&self) -> TriangleCoords<U> {
        TriangleCoords(self.0.map(|v| U::from_f64(v.to_f64().unwrap_or(f64::NAN)).unwrap_or(U::nan())))
    }
}

impl<T> From<[T; 6]> for TriangleCoords<T> {
    fn from(v: [T; 6]) -> Self {
        Self(v)
    }
}

/// Shoelace signed area; positive for counter-clockwise `a, b, c`.
pub fn signed_area<T: Scalar>(t: &TriangleCoords<T>) -> T {
    let [xa, ya, xb, yb, xc, yc] = t.0;
    ((xa - xc) * (yb - ya) - (xa - xb) * (yc - ya)) * T::lit(0.5)
}

/// Squared Euclidean distance between the stacked coordinate vectors.
pub fn displacement_cost<T: Scalar>(t: &TriangleCoords<T>, reference: &TriangleCoords<T>) -> T {
    t.0.iter()
        .zip(reference.0.iter())
        .fold(T::zero(), |acc, (a, b)| acc + (*a - *b) * (*a - *b))
}

pub fn centroid<T: Scalar>(t: &TriangleCoords<T>) -> [T; 2] {
    let [xa, ya, xb, yb, xc, yc] = t.0;
    let three = T::lit(3.0);
    [(xa + xb + xc) / three, (ya + yb + yc) / three]
}

/// `Σ‖vᵢ − v̄‖²` over the three vertices.
pub fn sum_squared_deviation<T: Scalar>(t: &TriangleCoords<T>) -> T {
    let [cx, cy] = centroid(t);
    (0..3).fold(T::zero(), |acc, i| {
        let [x, y] = t.vertex(i);
        acc + (x - cx) * (x - cx) + (y - cy) * (y - cy)
    })
}

/// Squared distances of `v_a` and `v_b` to `v_c`, summed.
pub fn fixed_vertex_spread<T: Scalar>(t: &TriangleCoords<T>) -> T {
    let [xa, ya, xb, yb, xc, yc] = t.0;
    (xa - xc) * (xa - xc) + (ya - yc) * (ya - yc) + (xb - xc) * (xb - xc) + (yb - yc) * (yb - yc)
}

/// Squared length of edge `v_b v_c`.
pub fn fixed_edge_length_sq<T: Scalar>(t: &TriangleCoords<T>) -> T {
    let [_, _, xb, yb, xc, yc] = t.0;
    (xb - xc) * (xb - xc) + (yb - yc) * (yb - yc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// Counter-clockwise, `s = +1`.
    Positive,
    /// Clockwise, `s = −1`.
    Negative,
}

impl Orientation {
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Orientation::Positive => T::one(),
            Orientation::Negative => -T::one(),
        }
    }

    pub fn from_sign(s: i32) -> Option<Self> {
        match s {
            1 => Some(Orientation::Positive),
            -1 => Some(Orientation::Negative),
            _ => None,
        }
    }

    /// Orientation of a triangle; zero area counts as positive.
    pub fn of<T: Scalar>(t: &TriangleCoords<T>) -> Self {
        if signed_area(t) < T::zero() {
            Orientation::Negative
        } else {
            Orientation::Positive
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SpecError {
    #[error("prescribed area must be positive and finite, got {0}")]
    Area(f64),
    #[error("area tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
}

pub const DEFAULT_TOLERANCE: f64 = 1e-3;

/// Target of a projection: `s·A*(v) = A_o`, accepted within `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSpec<T> {
    pub area: T,
    pub orientation: Orientation,
    pub tolerance: T,
}

impl<T: Scalar> ProjectionSpec<T> {
    pub fn new(area: T, orientation: Orientation, tolerance: T) -> Result<Self, SpecError> {
        if !(area > T::zero() && area.is_finite()) {
            return Err(SpecError::Area(area.to_f64().unwrap_or(f64::NAN)));
        }
        if !(tolerance > T::zero() && tolerance.is_finite()) {
            return Err(SpecError::Tolerance(tolerance.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { area, orientation, tolerance })
    }

    /// Spec with the default tolerance `1e-3`.
    pub fn with_area(area: T, orientation: Orientation) -> Result<Self, SpecError> {
        Self::new(area, orientation, T::lit(DEFAULT_TOLERANCE))
    }

    pub fn s(&self) -> T {
        self.orientation.sign()
    }

    /// `s·A*(t) − A_o`.
    pub fn residual(&self, t: &TriangleCoords<T>) -> T {
        self.s() * signed_area(t) - self.area
    }

    /// Whether `t` meets the constraint, with a floor of `10·eps·scale` on the tolerance.
    pub fn accepts(&self, t: &TriangleCoords<T>) -> bool {
        let scale = self.area.max(t.max_abs() * t.max_abs()).max(T::one());
        let tol = self.tolerance.max(T::lit(10.0) * T::epsilon() * scale);
        self.residual(t).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_area_examples() {
        assert_eq!(signed_area(&TriangleCoords([0.0, 0.0, 1.0, 0.0, 0.0, 1.0])), 0.5);
        assert_eq!(signed_area(&TriangleCoords([0.0, 0.0, 0.0, 1.0, 1.0, 0.0])), -0.5);
        let row = TriangleCoords::<f64>([0.666, 0.666, 0.666, -0.333, -1.333, -0.333]);
        assert!((signed_area(&row) + 1.0).abs() < 2e-3);
    }

    #[test]
    fn cost_examples() {
        let t = TriangleCoords([0.3, 1.0, -2.0, 4.0, 0.5, 0.5]);
        assert_eq!(displacement_cost(&t, &t), 0.0);
        let e = TriangleCoords([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(displacement_cost(&e, &TriangleCoords::zeros()), 1.0);
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(centroid(&TriangleCoords([0.0, 0.0, 3.0, 0.0, 0.0, 3.0])), [1.0, 1.0]);
        assert_eq!(centroid(&TriangleCoords([2.0, 5.0, 2.0, 5.0, 2.0, 5.0])), [2.0, 5.0]);
        let h = 3f64.sqrt() / 2.0;
        let c = centroid(&TriangleCoords([0.0, 0.0, 1.0, 0.0, 0.5, h]));
        assert!((c[0] - 0.5).abs() < 1e-15 && (c[1] - 3f64.sqrt() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn deviation_examples() {
        assert_eq!(sum_squared_deviation(&TriangleCoords([1.5; 6])), 0.0);
        let h = 3f64.sqrt() / 2.0;
        assert!((sum_squared_deviation(&TriangleCoords([0.0, 0.0, 1.0, 0.0, 0.5, h])) - 1.0).abs() < 1e-14);
        let d = sum_squared_deviation(&TriangleCoords::<f64>([0.0, 0.0, 2.0, 0.0, 0.0, 0.0]));
        assert!((d - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn spread_and_edge_examples() {
        assert_eq!(fixed_vertex_spread(&TriangleCoords([0.0; 6])), 0.0);
        assert_eq!(fixed_vertex_spread(&TriangleCoords([1.0, 0.0, 0.0, 1.0, 0.0, 0.0])), 2.0);
        assert_eq!(fixed_vertex_spread(&TriangleCoords([1.0, 0.0, 0.0, -1.0, 0.0, 0.0])), 2.0);
        assert_eq!(fixed_edge_length_sq(&TriangleCoords([5.0, 5.0, 1.0, 1.0, 1.0, 1.0])), 0.0);
        assert_eq!(fixed_edge_length_sq(&TriangleCoords([5.0, 5.0, 0.0, 0.0, 1.0, 0.0])), 1.0);
        assert_eq!(fixed_edge_length_sq(&TriangleCoords([5.0, 5.0, 1.0, 2.0, 4.0, 6.0])), 25.0);
    }

    #[test]
    fn spec_validation() {
        assert!(ProjectionSpec::with_area(0.0, Orientation::Positive).is_err());
        assert!(ProjectionSpec::with_area(-1.0, Orientation::Positive).is_err());
        assert!(ProjectionSpec::new(1.0, Orientation::Positive, 0.0).is_err());
        assert!(ProjectionSpec::with_area(0.5f32, Orientation::Negative).is_ok());
    }
}
