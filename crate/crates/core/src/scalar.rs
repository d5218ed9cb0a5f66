//! Scalar abstraction shared by every solver.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real floating-point type the solvers are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `1e-300` where representable, otherwise the smallest positive normal value.
    #[inline]
    fn tiny() -> Self {
        Self::lit(1e-300).max(Self::min_positive_value())
    }
}

impl Real for f32 {}
impl Real for f64 {}
