use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the projectors are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Sign with zero mapped to zero (unlike `Float::signum`, which maps +0 to 1).
    #[inline]
    fn sign0(self) -> Self {
        if self > Self::zero() {
            Self::one()
        } else if self < Self::zero() {
            -Self::one()
        } else {
            Self::zero()
        }
    }

    /// Pseudo-inverse of a scalar: `1/x`, with `0` mapped to `0`.
    #[inline]
    fn pinv(self) -> Self {
        if self == Self::zero() {
            Self::zero()
        } else {
            self.recip()
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
