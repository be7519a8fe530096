use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::Serialize;

/// Floating-point type the numerical core is written against.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Serialize + Send + Sync + 'static
{
    /// Pivot magnitude, relative to the largest pivot, below which a design
    /// column is declared collinear.
    const RANK_TOLERANCE: Self;
    /// Convergence threshold for continued fractions and root refinement.
    const SERIES_EPS: Self;

    /// Converts an `f64` literal. Every finite `f64` is representable, possibly rounded.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f64 {
    const RANK_TOLERANCE: Self = 1e-10;
    const SERIES_EPS: Self = 1e-14;
}

impl Scalar for f32 {
    const RANK_TOLERANCE: Self = 1e-5;
    const SERIES_EPS: Self = 1e-7;
}
