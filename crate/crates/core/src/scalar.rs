//! Scalar abstraction for the geometric kernel.
//!
//! The Möbius / Anti-de Sitter kernel is written against [`Real`], a thin
//! alias over `num_traits::Float`, so it can be instantiated at `f32` or
//! `f64`. All default tolerances are calibrated for `f64`; with `f32` they
//! are widened to a multiple of the machine epsilon (see [`Tol`]).

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + 'static
{
    /// Lift an `f64` constant into this scalar type.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A tolerance calibrated in `f64` and widened for coarser scalars.
///
/// `Tol::of(1e-9)` is exactly `1e-9` at `f64` but is floored at
/// `64 * epsilon` so the same code remains usable at `f32`.
pub struct Tol;

impl Tol {
    pub fn of<F: Real>(calibrated: f64) -> F {
        let floor = F::epsilon() * F::c(64.0);
        F::c(calibrated).max(floor)
    }
}
