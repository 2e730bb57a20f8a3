//! B-spline curves and surfaces: evaluation, knot and degree manipulation,
//! interpolation and least-squares approximation.

mod approximate;
mod basis;
mod compat;
mod curve;
mod interpolate;
mod knots;
mod surface;

pub use approximate::{approximate, approximate_constrained, approximation_knots, ConstrainedFit};
pub use basis::basis_functions;
pub(crate) use basis::basis_values;
pub use compat::make_curves_compatible;
pub use curve::BSplineCurve;
pub use interpolate::{
    centripetal_params, chord_length_params, collapse_duplicates, interpolate_points,
    EndTangents, ParamList,
};
pub use knots::KnotVector;
pub use surface::BSplineSurface;
