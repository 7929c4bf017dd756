//! Scalar abstractions shared by the algebraic layer.
//!
//! [`Ring`] is enough for exact octonion products (integers, rationals),
//! [`Real`] adds what norms, square roots and orthogonalisation need.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign};

/// Commutative ring with negation: `i64`, `Rational64`, `f32`, `f64`, ...
pub trait Ring: Copy + Debug + PartialEq + Num + Neg<Output = Self> {}

impl<T> Ring for T where T: Copy + Debug + PartialEq + Num + Neg<Output = T> {}

/// Floating point scalars: `f32` and `f64`.
pub trait Real:
    Ring + Float + FloatConst + FromPrimitive + NumAssign + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Precondition tolerance that is meaningful at this precision: the
    /// requested value, floored at a few hundred ulps.
    fn tolerance(requested: f64) -> Self {
        Self::lit(requested).max(Self::epsilon() * Self::lit(256.0))
    }
}

impl<T> Real for T where
    T: Ring + Float + FloatConst + FromPrimitive + NumAssign + Send + Sync + 'static
{
}
