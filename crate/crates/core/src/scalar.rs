//! Scalar abstraction for all time-like quantities (seconds, compute units,
//! bandwidths). Money is deliberately *not* a scalar; see [`crate::money`].

use std::fmt;

/// Floating-point scalar the simulation math is generic over: `f32` or `f64`.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + num_traits::NumAssign
    + fmt::Debug
    + fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for pulling an `f64` constant into the working scalar type.
pub(crate) fn s<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("f64 constant representable in scalar type")
}
