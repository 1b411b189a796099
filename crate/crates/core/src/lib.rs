//! Earthquake maps of the hyperbolic plane, computed through convex hulls in
//! Anti-de Sitter 3-space.
//!
//! Given an orientation-preserving piecewise-Möbius homeomorphism `f` of the
//! circle, the library embeds the graph of `f` into the boundary of the
//! Lie-group model of Anti-de Sitter space, takes its convex hull in a
//! spacelike affine chart, extracts the two pleated boundary components, and
//! turns them into the left and right earthquake maps extending `f`. A
//! verifier checks the earthquake axioms numerically, and finite laminations
//! can be synthesized into boundary maps for round-trip validation.
//!
//! The geometric kernel ([`mobius`], [`adsgeom`]) is generic over the scalar
//! through [`scalar::Real`]; the pipeline modules and the type aliases at the
//! crate root are `f64`, which is what every default tolerance is calibrated
//! for.

// `!(x > 0)` is used instead of `x <= 0` where NaN must fail the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// index loops that split borrows across the indexed containers
#![allow(clippy::needless_range_loop)]

pub mod scalar;

mod mat2;

pub mod adsgeom;
pub mod circlemap;
pub mod earthquake;
pub mod hull;
pub mod mobius;
pub mod render;
pub mod schema;

pub use mat2::Mat2 as GenericMat2;

/// `f64` instantiations of the generic kernel types.
pub type Mat2 = mat2::Mat2<f64>;
pub type Mobius = mobius::Mobius<f64>;
pub type AntiMobius = mobius::AntiMobius<f64>;
pub type SL2Tangent = mobius::SL2Tangent<f64>;
pub type RP1Point = mobius::RP1Point<f64>;
pub type H2Point = mobius::H2Point<f64>;
pub type Geodesic = mobius::Geodesic<f64>;
pub type AdSPoint = adsgeom::AdSPoint<f64>;
pub type AdSBoundaryPoint = adsgeom::AdSBoundaryPoint<f64>;
pub type AdSPlane = adsgeom::AdSPlane<f64>;
pub type ChartCoords = adsgeom::ChartCoords<f64>;
pub type AdSIsometry = adsgeom::AdSIsometry<f64>;

pub use mobius::{MobiusClass, MobiusError, Orientation, Side};
pub use adsgeom::{AdsError, PlaneBoundary, PlaneKind, SideSign};
