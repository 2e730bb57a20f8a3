//! Compatibility reparametrization: a monotone cubic σ maps common target
//! parameters to each curve's own intersection parameters, and the curve is
//! refitted as `f ∘ σ` on a shared uniform knot vector.

use crate::bspline::{
    approximate_constrained, interpolate_points, BSplineCurve, EndTangents, KnotVector, ParamList,
};
use crate::error::{Error, Result};
use crate::point::{Point, Point3};
use crate::scalar::Real;

/// Number of samples on which σ′ must stay positive.
pub const BIJECTIVITY_SAMPLES: usize = 1000;

/// Monotone map from target parameters to original curve parameters.
#[derive(Clone, Debug)]
pub struct ReparamFunction<T> {
    sigma: BSplineCurve<T, 1>,
}

impl<T: Real> ReparamFunction<T> {
    /// Interpolates `(targets[l], originals[l])` with a cubic (lower degree
    /// for fewer than four points, then elevated) and checks that the
    /// result is strictly increasing.
    pub fn new(targets: &ParamList<T>, originals: &[T]) -> Result<Self> {
        if targets.len() != originals.len() {
            return Err(Error::invalid(format!(
                "{} target parameters for {} original parameters",
                targets.len(),
                originals.len()
            )));
        }
        if targets.len() < 2 {
            return Err(Error::invalid("reparametrization needs at least two parameter pairs"));
        }
        let values: Vec<Point<T, 1>> = originals.iter().map(|&x| Point::scalar(x)).collect();
        let degree = 3.min(values.len() - 1);
        let sigma = interpolate_points(&values, targets, degree, false, EndTangents::none())?
            .elevate_degree(3)?;
        let f = ReparamFunction { sigma };
        f.check_bijective(BIJECTIVITY_SAMPLES)?;
        Ok(f)
    }

    pub fn curve(&self) -> &BSplineCurve<T, 1> {
        &self.sigma
    }

    pub fn eval(&self, u: T) -> T {
        self.sigma.point_at(u).value()
    }

    pub fn derivative(&self, u: T) -> T {
        self.sigma.derivatives_at(u, 1)[1].value()
    }

    /// Fails unless σ′ > 0 at `samples` evenly spaced parameters.
    pub fn check_bijective(&self, samples: usize) -> Result<()> {
        let (a, b) = self.sigma.domain();
        let n = samples.max(2);
        for i in 0..n {
            let u = a + (b - a) * T::from_count(i) / T::from_count(n - 1);
            let d = self.derivative(u);
            if !(d > T::zero()) {
                return Err(Error::Reparametrization(format!(
                    "reparametrization function is not monotone: derivative {} at u = {}; \
                     the intersection parameters of this curve are distributed too unevenly \
                     compared with the rest of its family",
                    d.as_f64(),
                    u.as_f64()
                )));
            }
        }
        Ok(())
    }

    /// Solves σ(u) = x by bisection; σ is increasing.
    pub fn inverse(&self, x: T) -> T {
        let (mut lo, mut hi) = self.sigma.domain();
        if x <= self.eval(lo) {
            return lo;
        }
        if x >= self.eval(hi) {
            return hi;
        }
        for _ in 0..200 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid) < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) * T::lit(0.5)
    }
}

/// Outcome of refitting one curve to the target parametrization.
#[derive(Clone, Debug)]
pub struct Reparametrized<T> {
    pub curve: BSplineCurve<T, 3>,
    pub sigma: ReparamFunction<T>,
    /// RMS distance between the fit and `f ∘ σ` at the fitting samples.
    pub rms_error: T,
    /// Largest distance between the fit and `f ∘ σ` on the fitting samples
    /// and the extra check samples.
    pub max_error: T,
}

/// Fitting options shared by a whole curve family.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FitOptions {
    pub n_ctrl: usize,
    pub degree: usize,
    pub check_samples: usize,
}

/// Refits `curve` so that the result passes through `curve(old_params[l])`
/// at `target_params[l]`. The output is a cubic (or the curve's degree if
/// higher) on a uniform knot vector over `[0, 1]` with `n_ctrl` control
/// points; kinks of the input are kept as full-multiplicity knots.
pub fn reparametrize_to_targets<T: Real>(
    curve: &BSplineCurve<T, 3>,
    old_params: &ParamList<T>,
    target_params: &ParamList<T>,
    n_ctrl: usize,
) -> Result<Reparametrized<T>> {
    let constraints: Vec<Point3<T>> = old_params.iter().map(|&u| curve.point_at(u)).collect();
    let opts = FitOptions { n_ctrl, degree: curve.degree().max(3), check_samples: 256 };
    reparametrize_with(curve, old_params, target_params, &constraints, opts)
}

pub(crate) fn reparametrize_with<T: Real>(
    curve: &BSplineCurve<T, 3>,
    old_params: &[T],
    target_params: &ParamList<T>,
    constraint_points: &[Point3<T>],
    opts: FitOptions,
) -> Result<Reparametrized<T>> {
    let FitOptions { n_ctrl, degree, check_samples } = opts;
    let m = target_params.len();
    if target_params.first() != T::zero() || target_params.last() != T::one() {
        return Err(Error::invalid("target parameters must span [0, 1]"));
    }
    if old_params.len() != m || constraint_points.len() != m {
        return Err(Error::invalid(format!(
            "{} original parameters and {} constraint points for {m} targets",
            old_params.len(),
            constraint_points.len()
        )));
    }
    let (a, b) = curve.domain();
    if old_params.iter().any(|&u| u < a || u > b) {
        return Err(Error::invalid(format!("original parameters must lie in [{a}, {b}]")));
    }
    if old_params.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("original parameters must be strictly increasing"));
    }
    if n_ctrl < degree + 1 || n_ctrl < m {
        return Err(Error::invalid(format!(
            "{n_ctrl} control points cannot carry degree {degree} and {m} interpolation constraints"
        )));
    }
    let sigma = ReparamFunction::new(target_params, old_params)?;

    let kinks: Vec<T> = curve
        .knots()
        .interior_distinct(curve.degree())
        .into_iter()
        .filter(|&(_, mult)| mult >= curve.degree())
        .map(|(u, _)| {
            match old_params.iter().position(|&o| (o - u).abs() <= T::lit(1e-12)) {
                Some(l) => target_params[l],
                None => sigma.inverse(u),
            }
        })
        .collect();
    let knots = kinked_uniform_knots(n_ctrl, degree, &kinks)?;

    let n = knots.control_count(degree);
    let n_s = (10 * n).max(100);
    let mut params: Vec<T> =
        (0..n_s).map(|j| T::from_count(j) / T::from_count(n_s - 1)).collect();
    // one sample inside every knot span keeps the normal equations regular
    // even where a kink knot sits close to a uniform one
    for w in knots.distinct().windows(2) {
        params.push((w[0].0 + w[1].0) * T::lit(0.5));
    }
    params.sort_by(|x, y| x.partial_cmp(y).expect("finite parameters"));
    params.dedup();
    let samples: Vec<Point3<T>> = params.iter().map(|&u| curve.point_at(sigma.eval(u))).collect();
    let constraints: Vec<(T, Point3<T>)> =
        target_params.iter().copied().zip(constraint_points.iter().copied()).collect();
    let fit = approximate_constrained(&samples, &params, &constraints, degree, &knots)?;

    let mut max_error = fit.max_error;
    let nc = check_samples.max(2);
    for i in 0..nc {
        let u = (T::from_count(i) + T::lit(0.5)) / T::from_count(nc);
        let d = fit.curve.point_at(u).distance(&curve.point_at(sigma.eval(u)));
        max_error = max_error.max(d);
    }
    Ok(Reparametrized { curve: fit.curve, sigma, rms_error: fit.rms_error, max_error })
}

/// Uniform clamped knots for `n_ctrl` control points with every kink
/// parameter raised to multiplicity `degree`. A kink closer than half a
/// span to a uniform knot replaces it instead of adding a sliver span.
pub(crate) fn kinked_uniform_knots<T: Real>(n_ctrl: usize, degree: usize, kinks: &[T]) -> Result<KnotVector<T>> {
    let spans = n_ctrl - degree;
    let h = T::one() / T::from_count(spans);
    let mut interior: Vec<(T, usize)> = (1..spans).map(|i| (T::from_count(i) * h, 1)).collect();
    for &k in kinks {
        if k <= T::zero() || k >= T::one() {
            continue;
        }
        let nearest = interior
            .iter()
            .enumerate()
            .map(|(i, (u, _))| (i, (*u - k).abs()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).expect("finite knots"));
        match nearest {
            Some((i, d)) if d < h * T::lit(0.5) => interior[i] = (k, degree),
            _ => interior.push((k, degree)),
        }
    }
    interior.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite knots"));
    let mut merged: Vec<(T, usize)> = Vec::with_capacity(interior.len());
    for (u, m) in interior {
        match merged.last_mut() {
            Some(last) if last.0 == u => last.1 = last.1.max(m),
            _ => merged.push((u, m)),
        }
    }
    let flat: Vec<T> = merged.into_iter().flat_map(|(u, m)| std::iter::repeat(u).take(m)).collect();
    KnotVector::clamped(degree, T::zero(), T::one(), &flat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: &[f64]) -> ParamList<f64> {
        ParamList::new(v.to_vec()).unwrap()
    }

    fn line() -> BSplineCurve<f64, 3> {
        let k = KnotVector::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        BSplineCurve::new(1, k, vec![Point3::new(0.0, 0.0, 0.0), Point3::new(2.0, 1.0, -1.0)]).unwrap()
    }

    #[test]
    fn sigma_interpolates_and_inverts() {
        let s = ReparamFunction::new(&params(&[0.0, 0.4, 0.7, 1.0]), &[0.0, 0.35, 0.68, 1.0]).unwrap();
        assert_eq!(s.curve().degree(), 3);
        for (u, x) in [(0.0, 0.0), (0.4, 0.35), (0.7, 0.68), (1.0, 1.0)] {
            assert!((s.eval(u) - x).abs() < 1e-12);
            assert!((s.inverse(x) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_with_two_points_is_linear() {
        let s = ReparamFunction::new(&params(&[0.0, 1.0]), &[0.0, 1.0]).unwrap();
        assert!((s.eval(0.37) - 0.37).abs() < 1e-15);
    }

    #[test]
    fn non_monotone_sigma_is_rejected() {
        let e = ReparamFunction::new(&params(&[0.0, 0.95, 1.0]), &[0.0, 0.05, 1.0]).unwrap_err();
        assert!(matches!(e, Error::Reparametrization(_)), "{e}");
    }

    #[test]
    fn line_keeps_its_shape() {
        let r = reparametrize_to_targets(&line(), &params(&[0.0, 0.3, 1.0]), &params(&[0.0, 0.5, 1.0]), 8).unwrap();
        let expected = line().point_at(0.3);
        assert!(r.curve.point_at(0.5).distance(&expected) < 1e-9);
        // every point of the refit lies on the segment
        let dir = Point3::new(2.0, 1.0, -1.0);
        for i in 0..=50 {
            let p = r.curve.point_at(i as f64 / 50.0);
            assert!(p.cross(&dir).norm() < 1e-9);
            let t = p.dot(&dir) / dir.dot(&dir);
            assert!((-1e-9..=1.0 + 1e-9).contains(&t));
        }
    }

    #[test]
    fn kink_is_kept() {
        let k = KnotVector::new(vec![0.0, 0.0, 0.5, 1.0, 1.0]).unwrap();
        let vee = BSplineCurve::new(
            1,
            k,
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 1.0, 0.0), Point3::new(2.0, 0.0, 0.0)],
        )
        .unwrap();
        let r = reparametrize_to_targets(&vee, &params(&[0.0, 0.3, 1.0]), &params(&[0.0, 0.4, 1.0]), 10).unwrap();
        let (u_kink, _) = r.curve.knots().interior_distinct(3).into_iter().find(|&(_, m)| m == 3).unwrap();
        assert!(r.curve.point_at(u_kink).distance(&Point3::new(1.0, 1.0, 0.0)) < 1e-6);
        assert!(r.max_error < 1e-6, "{}", r.max_error);
    }

    #[test]
    fn uniform_cubic_is_reproduced() {
        let k = KnotVector::uniform(6, 3).unwrap();
        let pts = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 2.0, 0.0),
            Point3::new(2.0, -1.0, 1.0),
            Point3::new(3.0, 0.5, 0.0),
            Point3::new(4.0, 1.0, -1.0),
            Point3::new(5.0, 0.0, 0.0),
        ];
        let c = BSplineCurve::new(3, k, pts.clone()).unwrap();
        let same = params(&[0.0, 0.5, 1.0]);
        let r = reparametrize_to_targets(&c, &same, &same, 6).unwrap();
        for (p, q) in r.curve.control_points().iter().zip(&pts) {
            assert!(p.distance(q) < 1e-9);
        }
    }

    #[test]
    fn too_few_control_points() {
        let e = reparametrize_to_targets(&line(), &params(&[0.0, 0.3, 1.0]), &params(&[0.0, 0.5, 1.0]), 3).unwrap_err();
        assert!(matches!(e, Error::InvalidArgument(_)));
    }

    #[test]
    fn kink_near_uniform_knot_replaces_it() {
        let k: KnotVector<f64> = kinked_uniform_knots(7, 3, &[0.26]).unwrap();
        assert_eq!(k.as_slice(), &[0.0, 0.0, 0.0, 0.0, 0.26, 0.26, 0.26, 0.5, 0.75, 1.0, 1.0, 1.0, 1.0]);
    }
}
