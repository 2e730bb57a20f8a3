//! Cox–de Boor evaluation of B-spline basis functions and their derivatives.

use crate::bspline::knots::KnotVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// The `degree + 1` basis functions nonzero on span `span`, evaluated at `u`.
pub(crate) fn basis_values<T: Real>(knots: &[T], degree: usize, span: usize, u: T) -> Vec<T> {
    let mut n = vec![T::zero(); degree + 1];
    let mut left = vec![T::zero(); degree + 1];
    let mut right = vec![T::zero(); degree + 1];
    n[0] = T::one();
    for j in 1..=degree {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        let mut saved = T::zero();
        for r in 0..j {
            let temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

/// Basis functions and their derivatives up to `order` on span `span`.
/// Row `k` holds the `k`-th derivatives; rows above `degree` are zero.
pub(crate) fn basis_derivatives<T: Real>(
    knots: &[T],
    degree: usize,
    span: usize,
    u: T,
    order: usize,
) -> Vec<Vec<T>> {
    let p = degree;
    let mut ndu = vec![vec![T::zero(); p + 1]; p + 1];
    let mut left = vec![T::zero(); p + 1];
    let mut right = vec![T::zero(); p + 1];
    ndu[0][0] = T::one();
    for j in 1..=p {
        left[j] = u - knots[span + 1 - j];
        right[j] = knots[span + j] - u;
        let mut saved = T::zero();
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let mut ders = vec![vec![T::zero(); p + 1]; order + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let top = order.min(p);
    let mut a = vec![vec![T::zero(); p + 1]; 2];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = T::one();
        for k in 1..=top {
            let mut d = T::zero();
            let rk = r as isize - k as isize;
            let pk = p - k;
            if r >= k {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                d = a[s2][0] * ndu[rk as usize][pk];
            }
            let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2 = if (r as isize - 1) <= pk as isize { k - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                d += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut factor = T::from_count(p);
    for k in 1..=top {
        for v in ders[k].iter_mut() {
            *v *= factor;
        }
        factor *= T::from_count(p - k);
    }
    ders
}

/// Slack admitted outside a parameter domain before a domain error is raised.
pub(crate) fn domain_slack<T: Real>(a: T, b: T) -> T {
    T::epsilon() * T::lit(64.0) * T::one().max(a.abs()).max(b.abs())
}

/// Validates `u` against `[a, b]` and clamps values within roundoff of the ends.
pub(crate) fn check_domain<T: Real>(u: T, a: T, b: T) -> Result<T> {
    let slack = domain_slack(a, b);
    if !(u >= a - slack && u <= b + slack) {
        return Err(Error::Domain { value: u.as_f64(), start: a.as_f64(), end: b.as_f64() });
    }
    Ok(u.max(a).min(b))
}

/// Nonzero basis functions `N_i^degree(u)` as `(index, value)` pairs.
pub fn basis_functions<T: Real>(
    u: T,
    degree: usize,
    knots: &KnotVector<T>,
) -> Result<Vec<(usize, T)>> {
    if knots.len() < 2 * (degree + 1) - 1 || knots.control_count(degree) == 0 {
        return Err(Error::invalid(format!(
            "{} knots cannot support degree {degree}",
            knots.len()
        )));
    }
    let (a, b) = knots.domain(degree);
    if !(a < b) {
        return Err(Error::invalid("knot vector has an empty domain"));
    }
    let u = check_domain(u, a, b)?;
    let span = knots.find_span(degree, u);
    Ok(basis_values(knots.as_slice(), degree, span, u)
        .into_iter()
        .enumerate()
        .map(|(j, v)| (span - degree + j, v))
        .collect())
}
