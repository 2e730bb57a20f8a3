//! Geometry kernel for interpolating networks of profile and guide curves
//! with single B-spline (Gordon) surfaces.
//!
//! All geometric types are generic over the scalar type through [`Real`];
//! the aliases at the crate root fix it to `f64` for everyday use.

pub mod bspline;
pub mod error;
pub mod gordon;
pub mod io;
pub mod linalg;
pub mod point;
pub mod profiles;
pub mod scalar;
pub mod skinning;

pub use bspline::{
    approximate_constrained, basis_functions, chord_length_params, interpolate_points,
    make_curves_compatible, BSplineCurve, BSplineSurface, EndTangents, KnotVector, ParamList,
};
pub use error::{Error, Result};
pub use gordon::{build_gordon_surface, CurveNetwork, GordonConfig, GordonSurface};
pub use linalg::{solve_linear, Matrix};
pub use point::{BoundingBox, Point, Point3};
pub use scalar::Real;

/// Three-dimensional `f64` point.
pub type Vec3 = Point3<f64>;
/// Geometric curve in 3-D space.
pub type Curve3 = BSplineCurve<f64, 3>;
/// Scalar-valued curve, used for reparametrization functions.
pub type Curve1 = BSplineCurve<f64, 1>;
pub type Surface = BSplineSurface<f64>;
pub type Knots = KnotVector<f64>;
pub type Params = ParamList<f64>;
