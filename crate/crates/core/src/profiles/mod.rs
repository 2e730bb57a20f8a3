//! Input curves for networks: point-list and CST profiles, guide points in
//! local coordinates and piecewise guides.

mod cst;
mod guide;

pub use cst::{cst_evaluate, cst_sample_points, cst_to_curve, CstParameters};
pub use guide::{
    assemble_guide, guide_point_to_3d, join_curves, order_guide_parts, ContinuityCondition,
    GuidePointLocal, PartLink,
};

use crate::bspline::{chord_length_params, collapse_duplicates, interpolate_points, BSplineCurve, EndTangents};
use crate::error::{Error, Result};
use crate::point::{BoundingBox, Point3};
use crate::scalar::Real;

/// Clamped cubic through an ordered point list at chord-length parameters.
/// Consecutive duplicates are dropped first.
pub fn point_list_profile<T: Real>(points: &[Point3<T>]) -> Result<BSplineCurve<T, 3>> {
    let scale = BoundingBox::from_points(points).map_or(T::one(), |b| b.diagonal().max(T::one()));
    let pts = collapse_duplicates(points, T::lit(1e-12) * scale);
    if pts.len() < 4 {
        return Err(Error::invalid(format!(
            "a point-list profile needs at least 4 distinct points, got {}",
            pts.len()
        )));
    }
    let params = chord_length_params(&pts)?;
    interpolate_points(&pts, &params, 3, false, EndTangents::none())
}
