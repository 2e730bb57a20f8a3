use crate::bspline::curve::BSplineCurve;
use crate::bspline::knots::KnotVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Brings curves on a common domain to one degree (the largest) and one
/// knot vector (the union of all knots at their largest multiplicity).
pub fn make_curves_compatible<T: Real, const D: usize>(
    curves: &[BSplineCurve<T, D>],
) -> Result<Vec<BSplineCurve<T, D>>> {
    let Some(first) = curves.first() else {
        return Ok(Vec::new());
    };
    let (a, b) = first.domain();
    let tol = T::lit(1e-12) * (b - a).abs().max(T::one());
    let mut prepared = Vec::with_capacity(curves.len());
    for (i, c) in curves.iter().enumerate() {
        let (ca, cb) = c.domain();
        if (ca - a).abs() > tol || (cb - b).abs() > tol {
            return Err(Error::invalid(format!(
                "curve {i} has domain [{ca}, {cb}], expected [{a}, {b}]"
            )));
        }
        let c = c.to_clamped();
        prepared.push(if (ca, cb) == (a, b) { c } else { c.reparametrized_affine(a, b)? });
    }
    let degree = prepared.iter().map(BSplineCurve::degree).max().unwrap_or(0);
    let elevated: Vec<BSplineCurve<T, D>> =
        prepared.iter().map(|c| c.elevate_degree(degree)).collect::<Result<_>>()?;
    let merged = elevated
        .iter()
        .skip(1)
        .fold(elevated[0].knots().clone(), |acc, c| acc.merged(c.knots()));
    elevated
        .iter()
        .map(|c| refine_to(c, &merged))
        .collect()
}

/// Inserts the knots of `target` that `curve` lacks.
pub(crate) fn refine_to<T: Real, const D: usize>(
    curve: &BSplineCurve<T, D>,
    target: &KnotVector<T>,
) -> Result<BSplineCurve<T, D>> {
    let missing = curve.knots().missing_from(target);
    let refined = curve.refine(&missing)?;
    debug_assert_eq!(refined.knots(), target);
    Ok(refined)
}
