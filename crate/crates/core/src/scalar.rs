//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Floating point scalar the geometry and dimension code is generic over.
///
/// The tolerance hooks scale with the precision of the type: the values
/// used for `f64` are the ones quoted throughout the documentation.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Tolerance for comparing maps and ratios (1e-9 for `f64`).
    fn map_tol() -> Self;
    /// Tolerance for quantities that are exact up to rounding (1e-12 for `f64`).
    fn exact_tol() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

macro_rules! impl_real {
    ($t:ty, $map:expr, $exact:expr) => {
        impl Real for $t {
            #[inline]
            fn map_tol() -> Self {
                $map
            }
            #[inline]
            fn exact_tol() -> Self {
                $exact
            }
        }
    };
}

impl_real!(f64, 1e-9, 1e-12);
impl_real!(f32, 1e-4, 1e-5);
