//! Global interpolation of point sequences by B-spline curves.

use std::ops::Deref;

use crate::bspline::basis::{basis_derivatives, basis_values};
use crate::bspline::curve::BSplineCurve;
use crate::bspline::knots::KnotVector;
use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::point::{BoundingBox, Point};
use crate::scalar::Real;

/// Strictly increasing list of curve parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamList<T>(Vec<T>);

impl<T: Real> ParamList<T> {
    pub fn new(params: Vec<T>) -> Result<Self> {
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("parameters must be finite"));
        }
        if let Some(i) = params.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(format!(
                "parameters must be strictly increasing; entries {i} and {} are {} and {}",
                i + 1,
                params[i],
                params[i + 1]
            )));
        }
        Ok(ParamList(params))
    }

    /// `n` uniformly spaced parameters covering `[0, 1]`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("need at least two parameters"));
        }
        let last = T::from_count(n - 1);
        Self::new((0..n).map(|i| T::from_count(i) / last).collect())
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn first(&self) -> T {
        self.0[0]
    }

    pub fn last(&self) -> T {
        self.0[self.0.len() - 1]
    }

    /// Affine rescale onto `[0, 1]` with exact endpoints.
    pub fn normalized(&self) -> Result<Self> {
        let (a, b) = (self.first(), self.last());
        if !(a < b) {
            return Err(Error::invalid("cannot normalize a single parameter"));
        }
        let n = self.0.len();
        Self::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    if i == 0 {
                        T::zero()
                    } else if i == n - 1 {
                        T::one()
                    } else {
                        (p - a) / (b - a)
                    }
                })
                .collect(),
        )
    }
}

impl<T> Deref for ParamList<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

fn cumulative_params<T: Real, const D: usize>(
    points: &[Point<T, D>],
    exponent: T,
) -> Result<ParamList<T>> {
    if points.len() < 2 {
        return Err(Error::invalid("need at least two points to parametrize"));
    }
    let steps: Vec<T> = points.windows(2).map(|w| w[0].distance(&w[1]).powf(exponent)).collect();
    let total: T = steps.iter().copied().sum();
    if !(total > T::zero()) || !total.is_finite() {
        return Err(Error::invalid("total chord length is zero"));
    }
    if let Some(i) = steps.iter().position(|s| !(*s > T::zero())) {
        return Err(Error::invalid(format!(
            "points {i} and {} coincide; collapse duplicates before parametrizing",
            i + 1
        )));
    }
    let mut acc = T::zero();
    let mut out = vec![T::zero()];
    for (i, s) in steps.iter().enumerate() {
        acc += *s;
        out.push(if i + 1 == steps.len() { T::one() } else { acc / total });
    }
    ParamList::new(out)
}

/// Parameters proportional to cumulative chord length, on `[0, 1]`.
pub fn chord_length_params<T: Real, const D: usize>(points: &[Point<T, D>]) -> Result<ParamList<T>> {
    cumulative_params(points, T::one())
}

/// Centripetal parametrization (square root of chord lengths), on `[0, 1]`.
pub fn centripetal_params<T: Real, const D: usize>(points: &[Point<T, D>]) -> Result<ParamList<T>> {
    cumulative_params(points, T::lit(0.5))
}

/// Drops points that coincide (within `tol`) with their predecessor.
pub fn collapse_duplicates<T: Real, const D: usize>(
    points: &[Point<T, D>],
    tol: T,
) -> Vec<Point<T, D>> {
    let mut out: Vec<Point<T, D>> = Vec::with_capacity(points.len());
    for p in points {
        match out.last() {
            Some(q) if q.distance(p) <= tol => {}
            _ => out.push(*p),
        }
    }
    out
}

/// Optional first-derivative constraints at the two ends of an open interpolant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EndTangents<T, const D: usize> {
    pub start: Option<Point<T, D>>,
    pub end: Option<Point<T, D>>,
}

impl<T, const D: usize> EndTangents<T, D> {
    pub fn none() -> Self {
        EndTangents { start: None, end: None }
    }

    pub fn both(start: Point<T, D>, end: Point<T, D>) -> Self {
        EndTangents { start: Some(start), end: Some(end) }
    }

    fn count(&self) -> usize {
        self.start.is_some() as usize + self.end.is_some() as usize
    }
}

/// Interpolates `points` at `params`.
///
/// Open curves are clamped with averaged knots; each supplied end tangent
/// adds one control point. Periodic curves require `points` to be closed
/// (first equals last) and come out `C^{degree-1}` across the seam; even
/// degrees use knots shifted to the parameter midpoints.
pub fn interpolate_points<T: Real, const D: usize>(
    points: &[Point<T, D>],
    params: &ParamList<T>,
    degree: usize,
    periodic: bool,
    tangents: EndTangents<T, D>,
) -> Result<BSplineCurve<T, D>> {
    if points.len() < 2 {
        return Err(Error::invalid("interpolation needs at least two points"));
    }
    if params.len() != points.len() {
        return Err(Error::invalid(format!(
            "{} parameters supplied for {} points",
            params.len(),
            points.len()
        )));
    }
    if degree == 0 {
        return Err(Error::invalid("interpolation degree must be at least 1"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::invalid("points must be finite"));
    }
    if periodic {
        if tangents.count() > 0 {
            return Err(Error::invalid("end tangents cannot be imposed on a periodic curve"));
        }
        interpolate_periodic(points, params, degree)
    } else {
        interpolate_open(points, params, degree, tangents)
    }
}

fn interpolate_open<T: Real, const D: usize>(
    points: &[Point<T, D>],
    params: &ParamList<T>,
    degree: usize,
    tangents: EndTangents<T, D>,
) -> Result<BSplineCurve<T, D>> {
    let n_ctrl = points.len() + tangents.count();
    if degree < 2 && tangents.count() > 0 {
        return Err(Error::invalid("end tangents need an interpolation degree of at least 2"));
    }
    if n_ctrl < degree + 1 {
        return Err(Error::invalid(format!(
            "{} conditions cannot determine a curve of degree {degree}",
            n_ctrl
        )));
    }
    let t = params.as_slice();
    let mut extended = Vec::with_capacity(n_ctrl);
    if tangents.start.is_some() {
        extended.push(t[0]);
    }
    extended.extend_from_slice(t);
    if tangents.end.is_some() {
        extended.push(t[t.len() - 1]);
    }
    let knots = KnotVector::averaged(&extended, degree)?;
    let kn = knots.as_slice();

    let mut a = Matrix::zeros(n_ctrl, n_ctrl);
    let mut rhs = Vec::with_capacity(n_ctrl);
    let mut row = 0;
    let mut push_row = |a: &mut Matrix<T>, span: usize, vals: &[T], rhs_val: Point<T, D>, rhs: &mut Vec<Point<T, D>>| {
        for (j, v) in vals.iter().enumerate() {
            a[(row, span - degree + j)] = *v;
        }
        rhs.push(rhs_val);
        row += 1;
    };
    for (i, (&u, p)) in t.iter().zip(points).enumerate() {
        let span = knots.find_span(degree, u);
        push_row(&mut a, span, &basis_values(kn, degree, span, u), *p, &mut rhs);
        let tangent = if i == 0 {
            tangents.start
        } else if i == t.len() - 1 {
            tangents.end
        } else {
            None
        };
        if let Some(d) = tangent {
            let ders = basis_derivatives(kn, degree, span, u, 1);
            push_row(&mut a, span, &ders[1], d, &mut rhs);
        }
    }
    let lu = Lu::factor(&a).map_err(|e| match e {
        Error::Singular { index } => Error::Numeric(format!(
            "interpolation system is singular at row {index}"
        )),
        other => other,
    })?;
    BSplineCurve::new(degree, knots, lu.solve_points(&rhs))
}

fn interpolate_periodic<T: Real, const D: usize>(
    points: &[Point<T, D>],
    params: &ParamList<T>,
    degree: usize,
) -> Result<BSplineCurve<T, D>> {
    let n = points.len() - 1;
    let scale = BoundingBox::from_points(points).map_or(T::one(), |b| b.diagonal()).max(T::one());
    if points[0].distance(&points[n]) > T::lit(1e-9) * scale {
        return Err(Error::invalid(
            "periodic interpolation needs a closed point list (first point equal to last)",
        ));
    }
    if n < degree + 1 {
        return Err(Error::invalid(format!(
            "periodic interpolation of degree {degree} needs at least {} distinct points",
            degree + 1
        )));
    }
    let t = params.as_slice();
    let period = t[n] - t[0];
    let ext = |k: isize| -> T {
        let q = k.div_euclid(n as isize);
        let r = k.rem_euclid(n as isize) as usize;
        t[r] + period * T::from_isize(q).expect("small integer")
    };
    let p = degree as isize;
    let half = T::lit(0.5);
    let knots: Vec<T> = (0..(n + 2 * degree + 1) as isize)
        .map(|j| {
            if degree % 2 == 1 {
                ext(j - p)
            } else {
                (ext(j - p) + ext(j - p + 1)) * half
            }
        })
        .collect();
    let knots = KnotVector::new(knots)?;
    let (a, b) = knots.domain(degree);

    let mut m = Matrix::zeros(n, n);
    for (k, &u0) in t[..n].iter().enumerate() {
        let mut u = u0;
        if u < a {
            u += period;
        }
        if u > b {
            u -= period;
        }
        let span = knots.find_span(degree, u);
        for (j, v) in basis_values(knots.as_slice(), degree, span, u).into_iter().enumerate() {
            m[(k, (span - degree + j) % n)] += v;
        }
    }
    let lu = Lu::factor(&m).map_err(|_| {
        Error::Numeric("periodic interpolation system is singular".to_string())
    })?;
    let q = lu.solve_points(&points[..n]);
    let cps: Vec<Point<T, D>> = (0..n + degree).map(|i| q[i % n]).collect();
    BSplineCurve::new_periodic(degree, knots, cps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point3;

    fn p3(x: f64, y: f64, z: f64) -> Point3<f64> {
        Point3::new(x, y, z)
    }

    #[test]
    fn chord_length_proportional() {
        let p = chord_length_params(&[p3(0.0, 0.0, 0.0), p3(1.0, 0.0, 0.0), p3(3.0, 0.0, 0.0)])
            .unwrap();
        assert_eq!(p.as_slice(), &[0.0, 1.0 / 3.0, 1.0]);
        let q = chord_length_params(&[p3(0.0, 0.0, 0.0), p3(1.0, 0.0, 0.0), p3(2.0, 0.0, 0.0)])
            .unwrap();
        assert_eq!(q.as_slice(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn chord_length_degenerate() {
        assert!(chord_length_params(&[p3(1.0, 1.0, 1.0), p3(1.0, 1.0, 1.0)]).is_err());
        assert!(chord_length_params(&[p3(0.0, 0.0, 0.0), p3(0.0, 0.0, 0.0), p3(1.0, 0.0, 0.0)])
            .is_err());
        let c = collapse_duplicates(&[p3(0.0, 0.0, 0.0), p3(0.0, 0.0, 0.0), p3(1.0, 0.0, 0.0)], 0.0);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn duplicate_params_rejected() {
        assert!(matches!(ParamList::new(vec![0.0, 0.5, 0.5, 1.0]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn two_points_linear() {
        let pts = [p3(0.0, 0.0, 0.0), p3(2.0, 1.0, 0.0)];
        let c = interpolate_points(&pts, &ParamList::uniform(2).unwrap(), 1, false, EndTangents::none())
            .unwrap();
        assert!(c.evaluate(0.5).unwrap().distance(&p3(1.0, 0.5, 0.0)) < 1e-15);
    }

    #[test]
    fn quadratic_through_three_points() {
        let pts = [p3(0.0, 0.0, 0.0), p3(0.5, 0.25, 0.0), p3(1.0, 1.0, 0.0)];
        let params = ParamList::new(vec![0.0, 0.5, 1.0]).unwrap();
        let c = interpolate_points(&pts, &params, 2, false, EndTangents::none()).unwrap();
        let expect = [p3(0.0, 0.0, 0.0), p3(0.5, 0.0, 0.0), p3(1.0, 1.0, 0.0)];
        for (a, b) in c.control_points().iter().zip(expect.iter()) {
            assert!(a.distance(b) < 1e-14);
        }
    }

    #[test]
    fn end_tangents_are_met() {
        let pts = [p3(0.0, 0.0, 0.0), p3(1.0, 1.0, 0.0), p3(2.0, 0.0, 1.0), p3(3.0, 0.5, 0.0)];
        let params = chord_length_params(&pts).unwrap();
        let (ts, te) = (p3(0.0, 3.0, 0.0), p3(4.0, 0.0, 0.0));
        let c = interpolate_points(&pts, &params, 3, false, EndTangents::both(ts, te)).unwrap();
        assert_eq!(c.control_points().len(), 6);
        for (u, p) in params.iter().zip(pts.iter()) {
            assert!(c.evaluate(*u).unwrap().distance(p) < 1e-12);
        }
        assert!(c.derivative(0.0, 1).unwrap().distance(&ts) < 1e-9);
        assert!(c.derivative(1.0, 1).unwrap().distance(&te) < 1e-9);

        let one = EndTangents { start: None, end: Some(te) };
        let c = interpolate_points(&pts, &params, 3, false, one).unwrap();
        assert!(c.derivative(1.0, 1).unwrap().distance(&te) < 1e-9);
    }

    fn square() -> Vec<Point3<f64>> {
        vec![
            p3(0.0, 0.0, 0.0),
            p3(1.0, 0.0, 0.0),
            p3(1.0, 1.0, 0.0),
            p3(0.0, 1.0, 0.0),
            p3(0.0, 0.0, 0.0),
        ]
    }

    fn octagon() -> Vec<Point3<f64>> {
        (0..=8)
            .map(|i| {
                let a = std::f64::consts::TAU * (i % 8) as f64 / 8.0;
                p3(a.cos(), 0.7 * a.sin(), 0.1 * (2.0 * a).cos())
            })
            .collect()
    }

    #[test]
    fn periodic_seam_continuity() {
        for (pts, degree) in [(square(), 2usize), (square(), 3), (octagon(), 3), (octagon(), 4), (octagon(), 5)] {
            let params = chord_length_params(&pts).unwrap();
            let c = interpolate_points(&pts, &params, degree, true, EndTangents::none()).unwrap();
            assert!(c.is_periodic());
            for (u, p) in params.iter().zip(pts.iter()) {
                assert!(c.evaluate(*u).unwrap().distance(p) < 1e-9, "degree {degree}");
            }
            let (a, b) = c.domain();
            let orders = (degree - 1).min(2);
            let lo = c.derivatives(a, orders).unwrap();
            let hi = c.derivatives(b, orders).unwrap();
            for k in 0..=orders {
                assert!(lo[k].distance(&hi[k]) < 1e-9, "degree {degree}, order {k}");
            }
        }
    }

    #[test]
    fn periodic_requires_closed_input() {
        let mut pts = square();
        pts[4] = p3(0.1, 0.0, 0.0);
        let params = chord_length_params(&pts).unwrap();
        assert!(interpolate_points(&pts, &params, 3, true, EndTangents::none()).is_err());
    }
}
