//! Nearest triangle with prescribed signed area, all three vertices free.
//!
//! The stationarity system `(I + λ s H/2) v = ṽ` is regular for `|λ| ≠ λ_o`
//! (Case I, solved through a depressed quartic in `λ`) and singular at
//! `λ = ±λ_o` (Case II, a one-parameter family of equilateral triangles).
//! Both cases are always evaluated and the cheapest feasible triangle wins.

use serde::{Deserialize, Serialize};

use crate::poly::{solve_depressed_quartic, DepressedQuarticCoefficients};
use crate::scalar::Scalar;
use crate::trigeom::{
    centroid, displacement_cost, signed_area, sum_squared_deviation, Orientation, ProjectionSpec,
    SpecError, TriangleCoords,
};

/// Multiplier magnitude at which the free system is singular, `4/√3`.
pub fn lambda_o<T: Scalar>() -> T {
    T::lit(4.0) / T::lit(3.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseICandidate<T> {
    pub triangle: TriangleCoords<T>,
    /// Real part of the quartic root the triangle was built from.
    pub multiplier: T,
    pub cost: T,
    pub area: T,
}

/// Case I triangles, split by whether they meet the area constraint.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CaseISolutionSet<T> {
    pub candidates: Vec<CaseICandidate<T>>,
    pub rejected: Vec<CaseICandidate<T>>,
}

/// The Case II family `v(θ) = diag(R(θ),R(θ),R(θ))·basis + translation`, and its cheapest member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseIISolution<T> {
    pub optimal: TriangleCoords<T>,
    pub basis: TriangleCoords<T>,
    pub translation: TriangleCoords<T>,
    /// `Re(φ)`; `ρ` in the one-fixed variant.
    pub scale: T,
    /// `k ∈ {−1, +1}`.
    pub branch: i8,
    /// Rotation angle of `optimal`.
    pub angle: T,
    pub cost: T,
    pub area: T,
    pub feasible: bool,
}

impl<T: Scalar> CaseIISolution<T> {
    pub fn generate(&self, theta: T) -> TriangleCoords<T> {
        generate_case2(self, theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChosenCase {
    I,
    II,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionOutcome<T> {
    pub optimal: TriangleCoords<T>,
    pub cost: T,
    pub area: T,
    pub orientation: Orientation,
    pub case1: CaseISolutionSet<T>,
    pub case2: CaseIISolution<T>,
    pub chosen: ChosenCase,
    /// Index into `case1.candidates` when Case I won.
    pub chosen_index: Option<usize>,
}

/// A 2D rotation stored as `(cos θ, sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation2<T> {
    pub cos: T,
    pub sin: T,
}

impl<T: Scalar> Rotation2<T> {
    pub fn identity() -> Self {
        Self { cos: T::one(), sin: T::zero() }
    }

    pub fn from_angle(theta: T) -> Self {
        let (sin, cos) = theta.sin_cos();
        Self { cos, sin }
    }

    pub fn angle(&self) -> T {
        self.sin.atan2(self.cos)
    }

    pub fn apply(&self, p: [T; 2]) -> [T; 2] {
        [self.cos * p[0] - self.sin * p[1], self.sin * p[0] + self.cos * p[1]]
    }

    /// Row-major `[[r00, r01], [r10, r11]]`.
    pub fn matrix(&self) -> [[T; 2]; 2] {
        [[self.cos, -self.sin], [self.sin, self.cos]]
    }

    pub fn determinant(&self) -> T {
        self.cos * self.cos + self.sin * self.sin
    }
}

/// Rotation `R` minimising `Σ‖R·sourceᵢ − targetᵢ‖²`.
///
/// For 2D point sets the reflection-guarded SVD solution reduces to the angle
/// `atan2(Σ sᵢ × tᵢ, Σ sᵢ · tᵢ)`. A vanishing cross-covariance returns the identity.
pub fn optimal_rotation<T: Scalar>(source: &[[T; 2]], target: &[[T; 2]]) -> Rotation2<T> {
    assert_eq!(source.len(), target.len(), "point sets differ in length");
    let mut dot = T::zero();
    let mut cross = T::zero();
    for (s, t) in source.iter().zip(target) {
        dot = dot + s[0] * t[0] + s[1] * t[1];
        cross = cross + s[0] * t[1] - s[1] * t[0];
    }
    let norm = dot.hypot(cross);
    if norm == T::zero() || !norm.is_finite() {
        return Rotation2::identity();
    }
    Rotation2 { cos: dot / norm, sin: cross / norm }
}

pub(crate) fn candidate<T: Scalar>(
    triangle: TriangleCoords<T>,
    multiplier: T,
    input: &TriangleCoords<T>,
) -> CaseICandidate<T> {
    CaseICandidate {
        triangle,
        multiplier,
        cost: displacement_cost(&triangle, input),
        area: signed_area(&triangle),
    }
}

/// Quartic coefficients `(p, q, r)` of the free Case I problem.
pub fn case1_quartic<T: Scalar>(input: &TriangleCoords<T>, spec: &ProjectionSpec<T>) -> DepressedQuarticCoefficients<T> {
    let s = spec.s();
    let ao = spec.area;
    let sa = s * signed_area(input);
    let three = T::lit(3.0);
    DepressedQuarticCoefficients::new(
        T::lit(-16.0) * (T::lit(2.0) * ao + sa) / (three * ao),
        T::lit(32.0) * sum_squared_deviation(input) / (three * ao),
        T::lit(256.0) * (ao - sa) / (T::lit(9.0) * ao),
    )
}

/// Triangle solving the regular stationarity system for multiplier `lambda`.
pub fn case1_vertices<T: Scalar>(input: &TriangleCoords<T>, s: T, lambda: T) -> TriangleCoords<T> {
    let [xa, ya, xb, yb, xc, yc] = input.0;
    let l2 = lambda * lambda;
    let m = l2 - T::lit(16.0);
    let f = T::lit(4.0) * s * lambda;
    let h = (T::lit(3.0) * l2 - T::lit(16.0)).pinv();
    TriangleCoords([
        h * (m * xa + l2 * (xb + xc) + f * (yb - yc)),
        h * (m * ya + l2 * (yb + yc) + f * (xc - xb)),
        h * (m * xb + l2 * (xa + xc) + f * (yc - ya)),
        h * (m * yb + l2 * (ya + yc) + f * (xa - xc)),
        h * (m * xc + l2 * (xa + xb) + f * (ya - yb)),
        h * (m * yc + l2 * (ya + yb) + f * (xb - xa)),
    ])
}

pub fn solve_case1<T: Scalar>(input: &TriangleCoords<T>, spec: &ProjectionSpec<T>) -> CaseISolutionSet<T> {
    let s = spec.s();
    let roots = solve_depressed_quartic(case1_quartic(input, spec));
    let mut set = CaseISolutionSet { candidates: Vec::new(), rejected: Vec::new() };
    for root in roots {
        let c = candidate(case1_vertices(input, s, root.re), root.re, input);
        if c.triangle.is_finite() && spec.accepts(&c.triangle) {
            set.candidates.push(c);
        } else {
            set.rejected.push(c);
        }
    }
    set
}

/// `k = s·sign(A*)` when `|A*| > E`, otherwise `−1`.
pub(crate) fn case2_branch<T: Scalar>(area: T, spec: &ProjectionSpec<T>) -> T {
    if area.abs() > spec.tolerance {
        spec.s() * area.sign0()
    } else {
        -T::one()
    }
}

pub fn solve_case2<T: Scalar>(input: &TriangleCoords<T>, spec: &ProjectionSpec<T>) -> CaseIISolution<T> {
    let s = spec.s();
    let area = signed_area(input);
    let k = case2_branch(area, spec);
    let sigma = area.sign0();
    let lo = lambda_o::<T>();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let quarter = T::lit(0.25);

    let radicand = lo * (sigma * area - T::lit(4.0) * k * spec.area) / T::lit(12.0);
    let phi = if radicand > T::zero() { radicand.sqrt() } else { T::zero() };
    let ks = k * s;
    let basis = TriangleCoords([
        -half * phi,
        -ks * two / lo * phi,
        -half * phi,
        ks * two / lo * phi,
        phi,
        T::zero(),
    ]);

    let [cx, cy] = centroid(input);
    let [xa, ya, xb, yb, xc, yc] = input.translated([-cx, -cy]).0;
    let g = sigma / (T::lit(3.0) * lo);
    let particular = TriangleCoords([
        half * xa + quarter * (xb + xc) + g * (yb - yc),
        half * ya + quarter * (yb + yc) - g * (xb - xc),
        half * xb + quarter * (xa + xc) - g * (ya - yc),
        half * yb + quarter * (ya + yc) + g * (xa - xc),
        half * xc + quarter * (xa + xb) + g * (ya - yb),
        half * yc + quarter * (ya + yb) - g * (xa - xb),
    ]);
    let translation = particular.translated([cx, cy]);
    finish_case2(input, spec, basis, translation, phi, k)
}

/// Picks the cost-optimal member of a Case II family.
pub(crate) fn finish_case2<T: Scalar>(
    input: &TriangleCoords<T>,
    spec: &ProjectionSpec<T>,
    basis: TriangleCoords<T>,
    translation: TriangleCoords<T>,
    scale: T,
    k: T,
) -> CaseIISolution<T> {
    let source = basis.vertices();
    let target: Vec<[T; 2]> = (0..3)
        .map(|i| {
            let (v, t) = (input.vertex(i), translation.vertex(i));
            [v[0] - t[0], v[1] - t[1]]
        })
        .collect();
    let rot = optimal_rotation(&source, &target);
    let mut sol = CaseIISolution {
        optimal: translation,
        basis,
        translation,
        scale,
        branch: if k < T::zero() { -1 } else { 1 },
        angle: rot.angle(),
        cost: T::zero(),
        area: T::zero(),
        feasible: false,
    };
    sol.optimal = apply_family(&basis, &translation, rot);
    sol.cost = displacement_cost(&sol.optimal, input);
    sol.area = signed_area(&sol.optimal);
    sol.feasible = sol.optimal.is_finite() && spec.accepts(&sol.optimal);
    sol
}

fn apply_family<T: Scalar>(basis: &TriangleCoords<T>, translation: &TriangleCoords<T>, rot: Rotation2<T>) -> TriangleCoords<T> {
    let mut out = *translation;
    for i in 0..3 {
        let r = rot.apply(basis.vertex(i));
        let t = translation.vertex(i);
        out.set_vertex(i, [r[0] + t[0], r[1] + t[1]]);
    }
    out
}

pub fn generate_case2<T: Scalar>(sol: &CaseIISolution<T>, theta: T) -> TriangleCoords<T> {
    apply_family(&sol.basis, &sol.translation, Rotation2::from_angle(theta))
}

/// Cheapest feasible triangle; Case I wins exact ties, then lower index.
pub(crate) fn select<T: Scalar>(
    input: &TriangleCoords<T>,
    spec: &ProjectionSpec<T>,
    case1: CaseISolutionSet<T>,
    case2: CaseIISolution<T>,
) -> ProjectionOutcome<T> {
    let mut best: Option<(T, ChosenCase, Option<usize>)> = None;
    let better = |cost: T, best: &Option<(T, ChosenCase, Option<usize>)>| match best {
        None => true,
        Some((b, _, _)) => cost < *b - T::lit(1e-12) * T::one().max(b.abs()),
    };
    for (i, c) in case1.candidates.iter().enumerate() {
        if better(c.cost, &best) {
            best = Some((c.cost, ChosenCase::I, Some(i)));
        }
    }
    if case2.feasible && better(case2.cost, &best) {
        best = Some((case2.cost, ChosenCase::II, None));
    }
    debug_assert!(best.is_some(), "no feasible candidate for {input:?}");
    let (chosen, chosen_index) = match best {
        Some((_, case, idx)) => (case, idx),
        None => (ChosenCase::II, None),
    };
    let optimal = match chosen_index {
        Some(i) => case1.candidates[i].triangle,
        None => case2.optimal,
    };
    ProjectionOutcome {
        optimal,
        cost: displacement_cost(&optimal, input),
        area: signed_area(&optimal),
        orientation: spec.orientation,
        case1,
        case2,
        chosen,
        chosen_index,
    }
}

/// Nearest triangle with `s·A*(v) = A_o`, all vertices free.
pub fn ottpao<T: Scalar>(input: &TriangleCoords<T>, spec: &ProjectionSpec<T>) -> ProjectionOutcome<T> {
    let case1 = solve_case1(input, spec);
    let case2 = solve_case2(input, spec);
    select(input, spec, case1, case2)
}

/// Nearest triangle with `|A*(v)| = A_o`, either orientation.
pub fn otppa<T: Scalar>(input: &TriangleCoords<T>, area: T, tolerance: T) -> Result<ProjectionOutcome<T>, SpecError> {
    let pos = ottpao(input, &ProjectionSpec::new(area, Orientation::Positive, tolerance)?);
    let neg = ottpao(input, &ProjectionSpec::new(area, Orientation::Negative, tolerance)?);
    Ok(if neg.cost < pos.cost { neg } else { pos })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(area: f64, s: Orientation) -> ProjectionSpec<f64> {
        ProjectionSpec::with_area(area, s).unwrap()
    }

    #[test]
    fn stationarity_residual_of_case1_vertices() {
        // X(λ)·v = ṽ with X = I + (sλ/4)·(area gradient operator)
        let input = TriangleCoords::<f64>([0.3, -0.2, 1.4, 0.1, 0.2, 0.9]);
        for &s in &[1.0, -1.0] {
            for &lambda in &[-3.0, -0.5, 0.7, 5.0] {
                let v = case1_vertices(&input, s, lambda);
                let [xa, ya, xb, yb, xc, yc] = v.0;
                let g = s * lambda / 4.0;
                let back = [
                    xa + g * (yb - yc),
                    ya + g * (xc - xb),
                    xb + g * (yc - ya),
                    yb + g * (xa - xc),
                    xc + g * (ya - yb),
                    yc + g * (xb - xa),
                ];
                for (b, t) in back.iter().zip(input.0) {
                    assert!((b - t).abs() < 1e-12, "{back:?} vs {input:?}");
                }
            }
        }
    }

    #[test]
    fn feasible_input_is_a_fixed_point() {
        let input = TriangleCoords([0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let out = ottpao(&input, &spec(0.5, Orientation::Positive));
        assert!(out.cost < 1e-20);
        assert_eq!(out.chosen, ChosenCase::I);
        assert!(out.case1.candidates.iter().any(|c| c.multiplier.abs() < 1e-12));
    }

    #[test]
    fn colocated_input_gives_equilateral() {
        let out = ottpao(&TriangleCoords([0.0; 6]), &spec(0.5, Orientation::Positive));
        assert_eq!(out.chosen, ChosenCase::II);
        assert!((out.cost - lambda_o::<f64>() * 0.5).abs() < 1e-12);
        assert!((out.area - 0.5).abs() < 1e-12);
        let t = out.optimal;
        let d = |i: usize, j: usize| {
            let (p, q) = (t.vertex(i), t.vertex(j));
            (p[0] - q[0]).hypot(p[1] - q[1])
        };
        assert!((d(0, 1) - d(1, 2)).abs() < 1e-12 && (d(1, 2) - d(2, 0)).abs() < 1e-12);
    }

    #[test]
    fn case2_family_meets_constraint_on_special_inputs() {
        let h = 3f64.sqrt() / 2.0;
        let equilateral = TriangleCoords::<f64>([0.1, 0.2, 1.1, 0.2, 0.6, 0.2 + h]);
        let colocated = TriangleCoords::<f64>([0.4, -0.3, 0.4, -0.3, 0.4, -0.3]);
        for input in [equilateral, colocated] {
            for s in [Orientation::Positive, Orientation::Negative] {
                let sp = spec(0.1, s);
                let sol = solve_case2(&input, &sp);
                assert!(sol.scale > 0.0);
                for i in 0..12 {
                    let v = generate_case2(&sol, i as f64 * 0.5);
                    assert!(sp.residual(&v).abs() < 1e-12, "{s:?} {}", sp.residual(&v));
                }
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let src: [[f64; 2]; 3] = [[1.0, 0.0], [0.0, 2.0], [-1.0, -1.0]];
        let r = optimal_rotation(&src, &src);
        assert!((r.cos - 1.0).abs() < 1e-15 && r.sin.abs() < 1e-15);
        let quarter = Rotation2::from_angle(std::f64::consts::FRAC_PI_2);
        let tgt: Vec<_> = src.iter().map(|p| quarter.apply(*p)).collect();
        let r = optimal_rotation(&src, &tgt);
        assert!((r.angle() - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert_eq!(optimal_rotation(&[[0.0, 0.0]; 3], &src), Rotation2::identity());
    }

    #[test]
    fn otppa_picks_cheaper_orientation() {
        let input = TriangleCoords::<f64>([0.827, -0.100, 0.327, 0.766, -1.155, -0.667]);
        let out = otppa(&input, 0.5, 1e-3).unwrap();
        assert_eq!(out.orientation, Orientation::Positive);
        assert!((out.cost.sqrt() - 0.345).abs() < 5e-3);
    }

    #[test]
    fn works_in_single_precision() {
        let input = TriangleCoords([0.827f32, -0.100, 0.327, 0.766, -1.155, -0.667]);
        let out = ottpao(&input, &ProjectionSpec::with_area(0.5f32, Orientation::Positive).unwrap());
        assert!((out.area - 0.5).abs() < 1e-3);
        assert!((out.cost.sqrt() - 0.345).abs() < 5e-3);
    }
}
