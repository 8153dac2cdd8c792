//! Closed-form solvers for real cubics (Cardano) and depressed quartics (Ferrari).
//!
//! Every projector reduces its stationarity conditions to a depressed quartic
//! `λ⁴ + pλ² + qλ + r = 0` in the Lagrange multiplier. The quartic is solved
//! through the largest real root of its resolvent cubic; when `q` vanishes the
//! quartic is biquadratic and is solved directly.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A root of a real polynomial, possibly complex.
pub type ComplexRoot<T> = Complex<T>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("leading cubic coefficient is zero")]
    NotCubic,
}

/// `a x³ + b x² + c x + d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoefficients<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> CubicCoefficients<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        ((x * self.a + self.b) * x + self.c) * x + self.d
    }
}

/// `λ⁴ + p λ² + q λ + r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepressedQuarticCoefficients<T> {
    pub p: T,
    pub q: T,
    pub r: T,
}

impl<T: Scalar> DepressedQuarticCoefficients<T> {
    pub fn new(p: T, q: T, r: T) -> Self {
        Self { p, q, r }
    }

    pub fn eval(&self, x: Complex<T>) -> Complex<T> {
        let x2 = x * x;
        (x2 + self.p) * x2 + x * self.q + self.r
    }

    fn derivative(&self, x: Complex<T>) -> Complex<T> {
        let four = T::lit(4.0);
        let two = T::lit(2.0);
        x * x * x * four + x * (self.p * two) + self.q
    }

    /// `max(1, |p|, |q|, |r|)`, the normalisation used for residual checks.
    pub fn scale(&self) -> T {
        T::one()
            .max(self.p.abs())
            .max(self.q.abs())
            .max(self.r.abs())
    }

    /// Threshold below which `q` is treated as zero and the biquadratic branch is used.
    pub fn q_threshold(&self) -> T {
        T::lit(1e-12) * T::one().max(self.p.abs()).max(self.r.abs())
    }
}

/// Sign class of the cubic discriminant `D = Q₁³ + Q₂²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscriminantClass {
    /// `D > 0`: one real root and a complex-conjugate pair.
    OneReal,
    /// `D = 0`: all roots real, at least two equal.
    RepeatedReal,
    /// `D < 0`: three distinct real roots.
    ThreeReal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots<T> {
    pub roots: [ComplexRoot<T>; 3],
    pub discriminant: T,
    pub class: DiscriminantClass,
}

impl<T: Scalar> CubicRoots<T> {
    /// Largest root among those with no imaginary part.
    pub fn max_real(&self) -> T {
        match self.class {
            DiscriminantClass::OneReal => self.roots[0].re,
            _ => self.roots.iter().map(|z| z.re).fold(T::neg_infinity(), T::max),
        }
    }
}

/// `true` when `|Im λ| ≤ 1e-8 (1 + |λ|)`.
pub fn is_real<T: Scalar>(z: ComplexRoot<T>) -> bool {
    z.im.abs() <= T::lit(1e-8) * (T::one() + z.norm())
}

/// Solves a real cubic with Cardano's formula.
///
/// Uses the trigonometric form when the discriminant is negative. Real roots
/// get one guarded Newton step.
pub fn solve_cubic<T: Scalar>(coeffs: CubicCoefficients<T>) -> Result<CubicRoots<T>, PolyError> {
    if coeffs.a == T::zero() {
        return Err(PolyError::NotCubic);
    }
    let b = coeffs.b / coeffs.a;
    let c = coeffs.c / coeffs.a;
    let d = coeffs.d / coeffs.a;
    let three = T::lit(3.0);
    let two = T::lit(2.0);

    let q1 = (three * c - b * b) / T::lit(9.0);
    let q2 = (T::lit(9.0) * b * c - T::lit(27.0) * d - two * b * b * b) / T::lit(54.0);
    let shift = -b / three;
    let q1_cubed = q1 * q1 * q1;
    let disc = q1_cubed + q2 * q2;
    let tol = T::lit(16.0) * T::epsilon() * (q1_cubed.abs() + q2 * q2);

    let real = |x: T| Complex::new(x, T::zero());
    let (class, mut roots) = if disc.abs() <= tol {
        let s = q2.cbrt();
        (
            DiscriminantClass::RepeatedReal,
            [real(two * s + shift), real(-s + shift), real(-s + shift)],
        )
    } else if disc > T::zero() {
        let sq = disc.sqrt();
        let big = if q2 >= T::zero() { q2 + sq } else { q2 - sq };
        let s1 = big.cbrt();
        let s2 = if s1 == T::zero() { T::zero() } else { -q1 / s1 };
        let re = -(s1 + s2) / two + shift;
        let im = three.sqrt() / two * (s1 - s2);
        (
            DiscriminantClass::OneReal,
            [real(s1 + s2 + shift), Complex::new(re, im), Complex::new(re, -im)],
        )
    } else {
        let rad = (-q1).sqrt();
        let cos_arg = (q2 / (rad * rad * rad)).max(-T::one()).min(T::one());
        let theta = cos_arg.acos();
        let tau = two * T::PI();
        let mut r = [real(T::zero()); 3];
        for (k, slot) in r.iter_mut().enumerate() {
            let angle = (theta + tau * T::lit(k as f64)) / three;
            *slot = real(two * rad * angle.cos() + shift);
        }
        (DiscriminantClass::ThreeReal, r)
    };

    let monic = CubicCoefficients::new(T::one(), b, c, d);
    for z in roots.iter_mut() {
        if z.im == T::zero() {
            let x = z.re;
            let f = ((x + b) * x + c) * x + d;
            let df = (three * x + two * b) * x + c;
            if df != T::zero() {
                let nx = x - f / df;
                if monic.eval(real(nx)).norm() < f.abs() {
                    z.re = nx;
                }
            }
        }
    }

    Ok(CubicRoots { roots, discriminant: disc, class })
}

/// Solves `λ⁴ + pλ² + qλ + r = 0`, returning all four roots (with multiplicity).
///
/// Complex roots come out in conjugate pairs.
pub fn solve_depressed_quartic<T: Scalar>(
    coeffs: DepressedQuarticCoefficients<T>,
) -> [ComplexRoot<T>; 4] {
    let DepressedQuarticCoefficients { p, q, r } = coeffs;
    let roots = if q.abs() < coeffs.q_threshold() {
        biquadratic_roots(p, r)
    } else {
        match resolvent_root(p, q, r) {
            Some(alpha) => ferrari_roots(p, q, alpha),
            None => biquadratic_roots(p, r),
        }
    };
    roots.map(|z| polish(&coeffs, z))
}

/// Largest real root of the resolvent `α³ + pα² + (p²/4 − r)α − q²/8`, if positive.
fn resolvent_root<T: Scalar>(p: T, q: T, r: T) -> Option<T> {
    let quarter = T::lit(0.25);
    let cubic = CubicCoefficients::new(T::one(), p, p * p * quarter - r, -q * q / T::lit(8.0));
    let mut alpha = solve_cubic(cubic).ok()?.max_real();
    // The resolvent has a positive root whenever q ≠ 0; tighten it before use.
    for _ in 0..2 {
        let f = ((alpha + p) * alpha + cubic.c) * alpha + cubic.d;
        let df = (T::lit(3.0) * alpha + T::lit(2.0) * p) * alpha + cubic.c;
        if df == T::zero() {
            break;
        }
        let next = alpha - f / df;
        let f_next = ((next + p) * next + cubic.c) * next + cubic.d;
        if f_next.abs() < f.abs() {
            alpha = next;
        } else {
            break;
        }
    }
    let floor = T::epsilon() * T::one().max(p.abs()).max(r.abs().sqrt());
    (alpha > floor).then_some(alpha)
}

fn ferrari_roots<T: Scalar>(p: T, q: T, alpha: T) -> [Complex<T>; 4] {
    let two = T::lit(2.0);
    let s = (two * alpha).sqrt();
    let half_q_over_s = q / (two * s);
    let base = p / two + alpha;
    // s1 = −1 factor: λ² + sλ + (p/2 + α − q/(2s)); s1 = +1 factor: λ² − sλ + (p/2 + α + q/(2s)).
    let [a, b] = quadratic_roots(s, base - half_q_over_s);
    let [c, d] = quadratic_roots(-s, base + half_q_over_s);
    [a, b, c, d]
}

/// Roots of `x² + bx + c` with real coefficients.
fn quadratic_roots<T: Scalar>(b: T, c: T) -> [Complex<T>; 2] {
    let two = T::lit(2.0);
    let disc = b * b - T::lit(4.0) * c;
    if disc >= T::zero() {
        let sq = disc.sqrt();
        let t = if b >= T::zero() { -(b + sq) / two } else { (sq - b) / two };
        let other = if t != T::zero() { c / t } else { -b - t };
        let (lo, hi) = if t <= other { (t, other) } else { (other, t) };
        [Complex::new(lo, T::zero()), Complex::new(hi, T::zero())]
    } else {
        let re = -b / two;
        let im = (-disc).sqrt() / two;
        [Complex::new(re, -im), Complex::new(re, im)]
    }
}

fn biquadratic_roots<T: Scalar>(p: T, r: T) -> [Complex<T>; 4] {
    let two = T::lit(2.0);
    let disc = p * p - T::lit(4.0) * r;
    let (mu1, mu2) = if disc >= T::zero() {
        let sq = disc.sqrt();
        let m1 = if p >= T::zero() { -(p + sq) / two } else { (sq - p) / two };
        let m2 = if m1 != T::zero() { r / m1 } else { -p - m1 };
        (Complex::new(m1, T::zero()), Complex::new(m2, T::zero()))
    } else {
        let re = -p / two;
        let im = (-disc).sqrt() / two;
        (Complex::new(re, im), Complex::new(re, -im))
    };
    let sqrt = |mu: Complex<T>| {
        if mu.im == T::zero() {
            if mu.re >= T::zero() {
                Complex::new(mu.re.sqrt(), T::zero())
            } else {
                Complex::new(T::zero(), (-mu.re).sqrt())
            }
        } else {
            mu.sqrt()
        }
    };
    let (a, b) = (sqrt(mu1), sqrt(mu2));
    [-a, a, -b, b]
}

/// One Newton step against the quartic, kept only if it lowers the residual.
fn polish<T: Scalar>(coeffs: &DepressedQuarticCoefficients<T>, z: Complex<T>) -> Complex<T> {
    let f = coeffs.eval(z);
    let df = coeffs.derivative(z);
    if df.norm_sqr() == T::zero() || !df.norm_sqr().is_finite() {
        return z;
    }
    let next = z - f / df;
    if next.re.is_finite() && next.im.is_finite() && coeffs.eval(next).norm() < f.norm() {
        next
    } else {
        z
    }
}
