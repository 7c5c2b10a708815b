//! Floating point abstraction shared by every model routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Real scalar the model is evaluated in: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every finite `f64` is representable (possibly rounded).
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }

    fn from_count(count: usize) -> Self {
        Self::from_usize(count).expect("count fits in scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Absolute comparison tolerance used by model and auction checks.
pub fn tolerance<T: Scalar>() -> T {
    T::lit(1e-9)
}
