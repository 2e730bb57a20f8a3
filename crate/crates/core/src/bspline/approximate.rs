//! Least-squares approximation with optional interpolation constraints,
//! solved through the Lagrange-multiplier (KKT) normal equations.

use crate::bspline::basis::{basis_values, check_domain};
use crate::bspline::curve::BSplineCurve;
use crate::bspline::knots::KnotVector;
use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::point::Point;
use crate::scalar::Real;

/// Result of a constrained least-squares fit.
#[derive(Clone, Debug)]
pub struct ConstrainedFit<T, const D: usize> {
    pub curve: BSplineCurve<T, D>,
    /// One multiplier per constraint.
    pub multipliers: Vec<Point<T, D>>,
    /// Root-mean-square distance between samples and the fitted curve.
    pub rms_error: T,
    pub max_error: T,
}

/// Clamped knot vector for fitting `n_ctrl` control points to data at
/// `params`, placing interior knots so that every span holds data.
pub fn approximation_knots<T: Real>(params: &[T], n_ctrl: usize, degree: usize) -> Result<KnotVector<T>> {
    let m = params.len();
    if n_ctrl < degree + 1 {
        return Err(Error::invalid(format!(
            "{n_ctrl} control points cannot carry degree {degree}"
        )));
    }
    if m <= n_ctrl {
        return Err(Error::invalid(format!(
            "{m} samples cannot determine {n_ctrl} control points"
        )));
    }
    let spans = n_ctrl - degree;
    let d = T::from_count(m) / T::from_count(spans);
    let mut interior = Vec::with_capacity(spans.saturating_sub(1));
    for j in 1..spans {
        let jd = T::from_count(j) * d;
        let i = jd.floor().to_usize().unwrap_or(0).clamp(1, m - 1);
        let alpha = jd - T::from_count(i);
        interior.push(params[i - 1] * (T::one() - alpha) + params[i] * alpha);
    }
    KnotVector::clamped(degree, params[0], params[m - 1], &interior)
}

/// Fits a curve of the given degree and knot vector to `samples` at
/// `sample_params` in the least-squares sense, subject to passing exactly
/// through every `(param, point)` constraint.
pub fn approximate_constrained<T: Real, const D: usize>(
    samples: &[Point<T, D>],
    sample_params: &[T],
    constraints: &[(T, Point<T, D>)],
    degree: usize,
    knots: &KnotVector<T>,
) -> Result<ConstrainedFit<T, D>> {
    let n = knots.control_count(degree);
    if n < degree + 1 {
        return Err(Error::invalid(format!(
            "knot vector of length {} cannot carry degree {degree}",
            knots.len()
        )));
    }
    if samples.len() != sample_params.len() {
        return Err(Error::invalid(format!(
            "{} samples but {} sample parameters",
            samples.len(),
            sample_params.len()
        )));
    }
    if samples.len() <= n {
        return Err(Error::invalid(format!(
            "{} samples cannot determine {n} control points",
            samples.len()
        )));
    }
    if constraints.len() > n {
        return Err(Error::invalid(format!(
            "{} constraints exceed {n} control points",
            constraints.len()
        )));
    }
    for (i, a) in constraints.iter().enumerate() {
        if constraints[..i].iter().any(|b| b.0 == a.0) {
            return Err(Error::invalid(format!("constraint parameter {} repeated", a.0)));
        }
    }
    let (lo, hi) = knots.domain(degree);
    let kn = knots.as_slice();
    let basis_row = |u: T| -> Result<(usize, Vec<T>)> {
        let u = check_domain(u, lo, hi)?;
        let span = knots.find_span(degree, u);
        Ok((span - degree, basis_values(kn, degree, span, u)))
    };

    let nc = constraints.len();
    let size = n + nc;
    let mut kkt = Matrix::zeros(size, size);
    let mut rhs = vec![Point::<T, D>::zero(); size];
    for (u, c) in sample_params.iter().zip(samples) {
        let (first, vals) = basis_row(*u)?;
        for (a, va) in vals.iter().enumerate() {
            rhs[first + a] += *c * *va;
            for (b, vb) in vals.iter().enumerate() {
                kkt[(first + a, first + b)] += *va * *vb;
            }
        }
    }
    for (l, (u, c)) in constraints.iter().enumerate() {
        let (first, vals) = basis_row(*u)?;
        for (a, va) in vals.iter().enumerate() {
            kkt[(n + l, first + a)] = *va;
            kkt[(first + a, n + l)] = *va;
        }
        rhs[n + l] = *c;
    }
    let lu = Lu::factor(&kkt).map_err(|e| match e {
        Error::Singular { index } if index >= n || nc > 0 => Error::Numeric(format!(
            "constrained least-squares system is singular (pivot {index}); constraints are rank deficient or a knot span holds no samples"
        )),
        Error::Singular { index } => Error::Numeric(format!(
            "least-squares normal equations are singular (pivot {index}); a knot span holds no samples"
        )),
        other => other,
    })?;
    let sol = lu.solve_points(&rhs);
    let curve = BSplineCurve::new(degree, knots.clone(), sol[..n].to_vec())?;
    let mut sq = T::zero();
    let mut max_error = T::zero();
    for (u, c) in sample_params.iter().zip(samples) {
        let d = curve.point_at(*u).distance(c);
        sq += d * d;
        max_error = max_error.max(d);
    }
    let rms_error = (sq / T::from_count(samples.len())).sqrt();
    Ok(ConstrainedFit { curve, multipliers: sol[n..].to_vec(), rms_error, max_error })
}

/// Plain least-squares fit without constraints.
pub fn approximate<T: Real, const D: usize>(
    samples: &[Point<T, D>],
    sample_params: &[T],
    degree: usize,
    knots: &KnotVector<T>,
) -> Result<BSplineCurve<T, D>> {
    Ok(approximate_constrained(samples, sample_params, &[], degree, knots)?.curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point3;

    #[test]
    fn collinear_samples_fit_exactly() {
        let params: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let samples: Vec<Point3<f64>> =
            params.iter().map(|&t| Point3::new(1.0 + 2.0 * t, -t, 0.5 * t)).collect();
        let knots = KnotVector::uniform(5, 3).unwrap();
        let fit = approximate_constrained(&samples, &params, &[], 3, &knots).unwrap();
        assert!(fit.max_error <= 1e-12);
    }

    #[test]
    fn too_few_samples() {
        let params = [0.0, 0.5, 1.0];
        let samples = [Point3::new(0.0, 0.0, 0.0); 3];
        let knots = KnotVector::uniform(4, 3).unwrap();
        assert!(matches!(
            approximate_constrained(&samples, &params, &[], 3, &knots),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn rank_deficient_constraints() {
        let params: Vec<f64> = (0..30).map(|i| i as f64 / 29.0).collect();
        let samples: Vec<Point1> = params.iter().map(|&t| Point([t * t])).collect();
        let knots = KnotVector::uniform(4, 1).unwrap();
        // three constraints inside one linear span exceed its two basis functions
        let cons = [(0.05, Point([0.0])), (0.1, Point([0.0])), (0.15, Point([1.0]))];
        assert!(matches!(
            approximate_constrained(&samples, &params, &cons, 1, &knots),
            Err(Error::Numeric(_))
        ));
    }

    type Point1 = Point<f64, 1>;

    #[test]
    fn knot_placement_covers_data() {
        let params: Vec<f64> = (0..50).map(|i| (i as f64 / 49.0).powi(2)).collect();
        let k = approximation_knots(&params, 10, 3).unwrap();
        assert_eq!(k.len(), 14);
        assert!(k.is_clamped(3));
    }
}
