//! Class/shape transformation (CST) airfoils:
//! `ζ(ψ) = ψ^N1 (1 − ψ)^N2 · Σ A_i B_{i,n}(ψ) + ψ ζ_T`.

use crate::bspline::{
    approximate_constrained, approximation_knots, chord_length_params, BSplineCurve, KnotVector,
};
use crate::error::{Error, Result};
use crate::point::Point3;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct CstParameters<T> {
    pub n1: T,
    pub n2: T,
    /// Shape-function coefficients `A_0 … A_n`.
    pub coefficients: Vec<T>,
    /// Trailing-edge thickness.
    pub zeta_te: T,
}

impl<T: Real> CstParameters<T> {
    pub fn new(n1: T, n2: T, coefficients: Vec<T>, zeta_te: T) -> Result<Self> {
        let p = CstParameters { n1, n2, coefficients, zeta_te };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n1 > T::zero()) || !(self.n2 > T::zero()) {
            return Err(Error::invalid(format!(
                "CST exponents must be positive, got N1 = {} and N2 = {}",
                self.n1, self.n2
            )));
        }
        if self.coefficients.is_empty() {
            return Err(Error::invalid("CST needs at least one shape coefficient"));
        }
        if !self.zeta_te.is_finite() || self.coefficients.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("CST parameters must be finite"));
        }
        Ok(())
    }
}

/// Height of the CST curve at chord position `psi ∈ [0, 1]`.
pub fn cst_evaluate<T: Real>(p: &CstParameters<T>, psi: T) -> Result<T> {
    p.validate()?;
    if !(psi >= T::zero() && psi <= T::one()) {
        return Err(Error::Domain { value: psi.as_f64(), start: 0.0, end: 1.0 });
    }
    let class = psi.powf(p.n1) * (T::one() - psi).powf(p.n2);
    Ok(class * bernstein_sum(&p.coefficients, psi) + psi * p.zeta_te)
}

/// `Σ A_i B_{i,n}(t)` by de Casteljau.
fn bernstein_sum<T: Real>(coefficients: &[T], t: T) -> T {
    let mut w = coefficients.to_vec();
    let s = T::one() - t;
    for level in 1..w.len() {
        for i in 0..w.len() - level {
            w[i] = w[i] * s + w[i + 1] * t;
        }
    }
    w[0]
}

/// Cosine-spaced chord positions clustering at both ends.
fn cosine_spacing<T: Real>(count: usize) -> Vec<T> {
    (0..count)
        .map(|i| {
            let theta = T::PI() * T::from_count(i) / T::from_count(count - 1);
            (T::one() - theta.cos()) * T::lit(0.5)
        })
        .map(|x: T| x.max(T::zero()).min(T::one()))
        .collect()
}

/// Points `(ψ, 0, ζ)` from the lower trailing edge round the leading edge
/// to the upper trailing edge. `n_samples` is the total count.
pub fn cst_sample_points<T: Real>(
    upper: &CstParameters<T>,
    lower: &CstParameters<T>,
    n_samples: usize,
) -> Result<Vec<Point3<T>>> {
    let half = n_samples / 2 + 1;
    let psi = cosine_spacing::<T>(half);
    let mut pts = Vec::with_capacity(2 * half - 1);
    for &x in psi.iter().rev() {
        pts.push(Point3::new(x, T::zero(), cst_evaluate(lower, x)?));
    }
    for &x in &psi[1..] {
        pts.push(Point3::new(x, T::zero(), cst_evaluate(upper, x)?));
    }
    Ok(pts)
}

/// Fits one clamped cubic through both CST halves. The lower half is taken
/// as given, so its coefficients (and trailing-edge value) normally carry
/// a negative sign. Both trailing-edge points and the leading edge are
/// interpolated exactly.
pub fn cst_to_curve<T: Real>(
    upper: &CstParameters<T>,
    lower: &CstParameters<T>,
    n_samples: usize,
    n_ctrl: usize,
) -> Result<BSplineCurve<T, 3>> {
    upper.validate()?;
    lower.validate()?;
    if n_ctrl < 4 || n_samples <= n_ctrl {
        return Err(Error::invalid(format!(
            "CST fit needs n_samples > n_ctrl >= 4, got n_samples = {n_samples}, n_ctrl = {n_ctrl}"
        )));
    }
    let pts = cst_sample_points(upper, lower, n_samples)?;
    let params = chord_length_params(&pts)?;
    let le = pts.len() / 2;
    let last = pts.len() - 1;
    let knots = split_knots(&params, le, n_ctrl)?;
    let constraints = [(params[0], pts[0]), (params[le], pts[le]), (params[last], pts[last])];
    Ok(approximate_constrained(&pts, &params, &constraints, 3, &knots)?.curve)
}

/// Fitting knots with a double knot at the leading edge, where the two
/// halves meet with a curvature jump. Each half gets its own averaged
/// interior knots.
fn split_knots<T: Real>(params: &[T], le: usize, n_ctrl: usize) -> Result<KnotVector<T>> {
    if n_ctrl < 8 {
        return approximation_knots(params, n_ctrl, 3);
    }
    let n_lower = (n_ctrl + 2) / 2;
    let n_upper = n_ctrl + 2 - n_lower;
    let lower = approximation_knots(&params[..=le], n_lower, 3)?;
    let upper = approximation_knots(&params[le..], n_upper, 3)?;
    let mut interior: Vec<T> = lower.as_slice()[4..lower.len() - 4].to_vec();
    interior.extend([params[le], params[le]]);
    interior.extend_from_slice(&upper.as_slice()[4..upper.len() - 4]);
    KnotVector::clamped(3, params[0], params[params.len() - 1], &interior)
}
