//! Nearest triangle with prescribed signed area when one or two vertices are fixed.
//!
//! Canonical layout: with one fixed vertex it sits in slot `c`; with two fixed
//! vertices they sit in slots `b` and `c`. Only cyclic relabelings are used so
//! the orientation of the triangle is unchanged by canonicalization.

use serde::{Deserialize, Serialize};

use crate::poly::{solve_depressed_quartic, DepressedQuarticCoefficients};
use crate::project_free::{
    candidate, case2_branch, finish_case2, ottpao, select, CaseISolutionSet, CaseIISolution, ProjectionOutcome,
};
use crate::scalar::Scalar;
use crate::trigeom::{
    displacement_cost, fixed_edge_length_sq, fixed_vertex_spread, signed_area, ProjectionSpec, TriangleCoords,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedKind {
    None,
    One,
    Two,
}

/// Which vertices are fixed, and the relabeling into canonical slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPattern {
    pub kind: FixedKind,
    /// Canonical slot `j` holds caller vertex `perm[j]`.
    pub perm: [usize; 3],
}

impl FixedPattern {
    pub fn identity() -> Self {
        Self { kind: FixedKind::None, perm: [0, 1, 2] }
    }

    pub fn apply<T: Scalar>(&self, t: &TriangleCoords<T>) -> TriangleCoords<T> {
        let mut out = *t;
        for (slot, &src) in self.perm.iter().enumerate() {
            out.set_vertex(slot, t.vertex(src));
        }
        out
    }

    pub fn unapply<T: Scalar>(&self, t: &TriangleCoords<T>) -> TriangleCoords<T> {
        let mut out = *t;
        for (slot, &dst) in self.perm.iter().enumerate() {
            out.set_vertex(dst, t.vertex(slot));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum FixedError {
    #[error("all three vertices are fixed")]
    AllFixed,
}

pub fn fixed_pattern(flags: [bool; 3]) -> Result<FixedPattern, FixedError> {
    let count = flags.iter().filter(|&&f| f).count();
    let shift = |first: usize| [first, (first + 1) % 3, (first + 2) % 3];
    match count {
        0 => Ok(FixedPattern::identity()),
        1 => {
            let f = flags.iter().position(|&x| x).unwrap_or(2);
            Ok(FixedPattern { kind: FixedKind::One, perm: shift((f + 1) % 3) })
        }
        2 => {
            let free = flags.iter().position(|&x| !x).unwrap_or(0);
            Ok(FixedPattern { kind: FixedKind::Two, perm: shift(free) })
        }
        _ => Err(FixedError::AllFixed),
    }
}

pub fn canonicalize<T: Scalar>(
    input: &TriangleCoords<T>,
    flags: [bool; 3],
) -> Result<(TriangleCoords<T>, FixedPattern), FixedError> {
    let pattern = fixed_pattern(flags)?;
    Ok((pattern.apply(input), pattern))
}

pub fn uncanonicalize<T: Scalar>(t: &TriangleCoords<T>, pattern: &FixedPattern) -> TriangleCoords<T> {
    pattern.unapply(t)
}

/// Quartic coefficients `(p, q, r)` with `v_c` fixed.
pub fn one_fixed_quartic<T: Scalar>(
    input: &TriangleCoords<T>,
    spec: &ProjectionSpec<T>,
) -> DepressedQuarticCoefficients<T> {
    let ao = spec.area;
    let sa = spec.s() * signed_area(input);
    DepressedQuarticCoefficients::new(
        T::lit(-16.0) * (T::lit(2.0) * ao + sa) / ao,
        T::lit(32.0) * fixed_vertex_spread(input) / ao,
        T::lit(256.0) * (ao - sa) / ao,
    )
}

/// Moving vertices solving the regular one-fixed stationarity system for `lambda`.
pub fn one_fixed_vertices<T: Scalar>(input: &TriangleCoords<T>, s: T, lambda: T) -> TriangleCoords<T> {
    let [xa, ya, xb, yb, xc, yc] = input.0;
    let l2 = lambda * lambda;
    let f = T::lit(4.0) * s * lambda;
    let sixteen = T::lit(16.0);
    let h = (l2 - sixteen).pinv();
    TriangleCoords([
        h * (xc * l2 + f * (yb - yc) - sixteen * xa),
        h * (yc * l2 + f * (xc - xb) - sixteen * ya),
        h * (xc * l2 + f * (yc - ya) - sixteen * xb),
        h * (yc * l2 + f * (xa - xc) - sixteen * yb),
        xc,
        yc,
    ])
}

pub fn solve_case1_one_fixed<T: Scalar>(input: &TriangleCoords<T>, spec: &ProjectionSpec<T>) -> CaseISolutionSet<T> {
    let s = spec.s();
    let mut set = CaseISolutionSet::default();
    for root in solve_depressed_quartic(one_fixed_quartic(input, spec)) {
        let c = candidate(one_fixed_vertices(input, s, root.re), root.re, input);
        if c.triangle.is_finite() && spec.accepts(&c.triangle) {
            set.candidates.push(c);
        } else {
            set.rejected.push(c);
        }
    }
    set
}

pub fn solve_case2_one_fixed<T: Scalar>(input: &TriangleCoords<T>, spec: &ProjectionSpec<T>) -> CaseIISolution<T> {
    let s = spec.s();
    let [fx, fy] = input.vertex(2);
    let local = input.translated([-fx, -fy]);
    let area = signed_area(&local);
    let k = case2_branch(area, spec);
    let sigma = area.sign0();

    let radicand = (sigma * area - T::lit(4.0) * k * spec.area) / T::lit(2.0);
    let rho = if radicand > T::zero() { radicand.sqrt() } else { T::zero() };
    let zero = T::zero();
    let basis = TriangleCoords([zero, k * s * rho, rho, zero, zero, zero]);

    let [xa, ya, xb, yb, _, _] = local.0;
    let quarter = T::lit(0.25);
    let translation = TriangleCoords([
        quarter * (xa + sigma * yb) + fx,
        quarter * (ya - sigma * xb) + fy,
        quarter * (xb - sigma * ya) + fx,
        quarter * (yb + sigma * xa) + fy,
        fx,
        fy,
    ]);
    let mut sol = finish_case2(input, spec, basis, translation, rho, k);
    sol.optimal.set_vertex(2, [fx, fy]);
    sol.cost = displacement_cost(&sol.optimal, input);
    sol
}

/// Nearest triangle with `s·A*(v) = A_o` and `v_c` fixed.
pub fn ottpao_one_fixed<T: Scalar>(input: &TriangleCoords<T>, spec: &ProjectionSpec<T>) -> ProjectionOutcome<T> {
    let case1 = solve_case1_one_fixed(input, spec);
    let case2 = solve_case2_one_fixed(input, spec);
    select(input, spec, case1, case2)
}

/// Moves `v_a` alone onto the constraint, `v_b` and `v_c` fixed.
///
/// The signed area is affine in `v_a`, so the step along its gradient is the
/// exact orthogonal projection. A fixed edge shorter than `√E` leaves the input unchanged.
pub fn project_two_fixed<T: Scalar>(input: &TriangleCoords<T>, spec: &ProjectionSpec<T>) -> TriangleCoords<T> {
    let po = fixed_edge_length_sq(input);
    if po <= spec.tolerance {
        return *input;
    }
    let [xa, ya, xb, yb, xc, yc] = input.0;
    let c = T::lit(2.0) * (spec.s() * spec.area - signed_area(input)) / po;
    TriangleCoords([xa + c * (yb - yc), ya + c * (xc - xb), xb, yb, xc, yc])
}

/// Result of a projection with any fixed-vertex pattern, in caller vertex order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedProjection<T> {
    pub optimal: TriangleCoords<T>,
    pub cost: T,
    pub area: T,
    pub pattern: FixedPattern,
    /// Full outcome in canonical vertex order; absent for two fixed vertices.
    pub outcome: Option<ProjectionOutcome<T>>,
}

pub fn project_with_fixed<T: Scalar>(
    input: &TriangleCoords<T>,
    fixed: [bool; 3],
    spec: &ProjectionSpec<T>,
) -> Result<FixedProjection<T>, FixedError> {
    let (canon, pattern) = canonicalize(input, fixed)?;
    let (canon_opt, outcome) = match pattern.kind {
        FixedKind::None => {
            let o = ottpao(&canon, spec);
            (o.optimal, Some(o))
        }
        FixedKind::One => {
            let o = ottpao_one_fixed(&canon, spec);
            (o.optimal, Some(o))
        }
        FixedKind::Two => (project_two_fixed(&canon, spec), None),
    };
    let mut optimal = pattern.unapply(&canon_opt);
    for i in 0..3 {
        if fixed[i] {
            optimal.set_vertex(i, input.vertex(i));
        }
    }
    Ok(FixedProjection {
        optimal,
        cost: displacement_cost(&optimal, input),
        area: signed_area(&optimal),
        pattern,
        outcome,
    })
}
