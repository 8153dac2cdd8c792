#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngExt};
use triproject::trigeom::{displacement_cost, signed_area, Orientation, ProjectionSpec, TriangleCoords};

pub fn random_triangle<R: Rng>(rng: &mut R, scale: f64) -> TriangleCoords<f64> {
    TriangleCoords(std::array::from_fn(|_| rng.random_range(-scale..scale)))
}

pub fn random_orientation<R: Rng>(rng: &mut R) -> Orientation {
    if rng.random_bool(0.5) {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}

pub fn random_spec<R: Rng>(rng: &mut R) -> ProjectionSpec<f64> {
    ProjectionSpec::with_area(rng.random_range(0.05..1.0), random_orientation(rng)).unwrap()
}

/// Gradient of the signed area with respect to the six coordinates.
pub fn area_gradient(v: &[f64; 6]) -> [f64; 6] {
    let [xa, ya, xb, yb, xc, yc] = *v;
    [
        0.5 * (yb - yc),
        0.5 * (xc - xb),
        0.5 * (yc - ya),
        0.5 * (xa - xc),
        0.5 * (ya - yb),
        0.5 * (xb - xa),
    ]
}

/// Constant Hessian of the signed area (the gradient is linear).
pub fn area_hessian() -> [[f64; 6]; 6] {
    let g0 = area_gradient(&[0.0; 6]);
    let mut h = [[0.0; 6]; 6];
    for j in 0..6 {
        let mut e = [0.0; 6];
        e[j] = 1.0;
        let g = area_gradient(&e);
        for i in 0..6 {
            h[i][j] = g[i] - g0[i];
        }
    }
    h
}

/// Best feasible point found by Lagrange–Newton iterations from `starts` random
/// starting points, moving only the coordinates listed in `free`.
pub fn kkt_oracle<R: Rng>(
    input: &TriangleCoords<f64>,
    spec: &ProjectionSpec<f64>,
    free: &[usize],
    starts: usize,
    rng: &mut R,
) -> Option<(TriangleCoords<f64>, f64)> {
    let s = spec.s();
    let h = area_hessian();
    let n = free.len();
    let scale = 1.0 + input.max_abs();
    let mut best: Option<(TriangleCoords<f64>, f64)> = None;
    for start in 0..starts {
        let mut x = input.0;
        for &i in free {
            x[i] = if start == 0 { x[i] } else { x[i] + rng.random_range(-1.5..1.5) * scale };
        }
        let mut mu = 0.0;
        for _ in 0..80 {
            let g = area_gradient(&x);
            let mut jac = DMatrix::<f64>::zeros(n + 1, n + 1);
            let mut rhs = DVector::<f64>::zeros(n + 1);
            for (r, &i) in free.iter().enumerate() {
                rhs[r] = -(2.0 * (x[i] - input.0[i]) - mu * s * g[i]);
                for (c, &j) in free.iter().enumerate() {
                    jac[(r, c)] = if r == c { 2.0 } else { 0.0 } - mu * s * h[i][j];
                }
                jac[(r, n)] = -s * g[i];
                jac[(n, r)] = s * g[i];
            }
            let t = TriangleCoords(x);
            rhs[n] = -(s * signed_area(&t) - spec.area);
            let Some(step) = jac.lu().solve(&rhs) else { break };
            for (r, &i) in free.iter().enumerate() {
                x[i] += step[r];
            }
            mu += step[n];
            if step.norm() < 1e-14 * scale {
                break;
            }
        }
        let t = TriangleCoords(x);
        if t.is_finite() && (s * signed_area(&t) - spec.area).abs() <= 1e-10 {
            let cost = displacement_cost(&t, input);
            if best.as_ref().is_none_or(|(_, c)| cost < *c) {
                best = Some((t, cost));
            }
        }
    }
    best
}
