//! Floating-point scalar abstraction shared by every numerical routine.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar usable throughout the crate: `f32` or `f64`.
///
/// Tolerances are written as `f64` literals tuned for double precision and
/// passed through [`Real::tol`], which widens them in proportion to the
/// machine epsilon of narrower types.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable in scalar type")
    }

    /// Lossy conversion back to `f64`, used for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    /// Scales a double-precision tolerance to this type's precision.
    fn tol(x: f64) -> Self {
        let ratio = Self::default_epsilon().as_f64() / f64::EPSILON;
        Self::lit(x * ratio.max(1.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
