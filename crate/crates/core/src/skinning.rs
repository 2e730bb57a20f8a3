//! Surfaces interpolating families of compatible curves (skinning) and
//! grids of points (tensor-product interpolation).

use crate::bspline::{basis_values, make_curves_compatible, BSplineCurve, BSplineSurface, KnotVector, ParamList};
use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::point::Point3;
use crate::scalar::Real;

/// Skinning degree across a family of `count` curves: cubic where possible.
pub fn default_skin_degree(count: usize) -> usize {
    count.saturating_sub(1).clamp(1, 3)
}

/// Collocation matrix `A[k][j] = N_j(params[k])` for a square interpolation system.
fn collocation<T: Real>(params: &[T], degree: usize, knots: &KnotVector<T>) -> Result<Lu<T>> {
    let n = params.len();
    if knots.control_count(degree) != n {
        return Err(Error::invalid(format!(
            "knot vector with {} knots gives {} control points for degree {degree}, expected {n}",
            knots.len(),
            knots.control_count(degree)
        )));
    }
    let (a, b) = knots.domain(degree);
    let mut m = Matrix::zeros(n, n);
    for (k, &u) in params.iter().enumerate() {
        if u < a || u > b {
            return Err(Error::Domain { value: u.as_f64(), start: a.as_f64(), end: b.as_f64() });
        }
        let span = knots.find_span(degree, u);
        for (j, v) in basis_values(knots.as_slice(), degree, span, u).into_iter().enumerate() {
            m[(k, span - degree + j)] = v;
        }
    }
    Lu::factor(&m).map_err(|e| match e {
        Error::Singular { index } => {
            Error::Numeric(format!("interpolation collocation matrix is singular at row {index}"))
        }
        other => other,
    })
}

/// Skins arbitrary curves: they are mapped onto `[0, 1]`, made compatible,
/// and placed in `v` by the mean distance between neighbouring curves.
pub fn loft<T: Real>(curves: &[BSplineCurve<T, 3>]) -> Result<BSplineSurface<T>> {
    if curves.len() < 2 {
        return Err(Error::invalid(format!("lofting needs at least two curves, got {}", curves.len())));
    }
    let normalized: Vec<BSplineCurve<T, 3>> = curves
        .iter()
        .map(|c| c.to_clamped().reparametrized_affine(T::zero(), T::one()))
        .collect::<Result<_>>()?;
    let compatible = make_curves_compatible(&normalized)?;
    const SAMPLES: usize = 16;
    let gaps: Vec<T> = compatible
        .windows(2)
        .map(|w| {
            (0..=SAMPLES)
                .map(|i| T::from_count(i) / T::from_count(SAMPLES))
                .map(|u| w[0].point_at(u).distance(&w[1].point_at(u)))
                .sum::<T>()
                / T::from_count(SAMPLES + 1)
        })
        .collect();
    let total: T = gaps.iter().copied().sum();
    if gaps.iter().any(|g| !(*g > T::zero())) {
        return Err(Error::invalid("neighbouring lofting curves coincide"));
    }
    let mut acc = T::zero();
    let mut v = vec![T::zero()];
    for (i, g) in gaps.iter().enumerate() {
        acc += *g;
        v.push(if i + 1 == gaps.len() { T::one() } else { acc / total });
    }
    skin_curves(&compatible, &ParamList::new(v)?, default_skin_degree(curves.len()))
}

/// Skins compatible curves: the result satisfies `s(·, v_params[k]) = curves[k]`.
/// The curve parameter becomes `u`; the family direction becomes `v` with
/// averaged knots of degree `degree_v`.
pub fn skin_curves<T: Real>(
    curves: &[BSplineCurve<T, 3>],
    v_params: &ParamList<T>,
    degree_v: usize,
) -> Result<BSplineSurface<T>> {
    let knots_v = if curves.len() >= 2 && degree_v >= 1 && degree_v < curves.len() {
        KnotVector::averaged(v_params, degree_v)?
    } else {
        KnotVector::new(vec![T::zero(), T::one()])?
    };
    skin_curves_with_knots(curves, v_params, degree_v, &knots_v)
}

/// Skinning with an explicit v-direction knot vector.
pub fn skin_curves_with_knots<T: Real>(
    curves: &[BSplineCurve<T, 3>],
    v_params: &ParamList<T>,
    degree_v: usize,
    knots_v: &KnotVector<T>,
) -> Result<BSplineSurface<T>> {
    if curves.len() < 2 {
        return Err(Error::invalid(format!("skinning needs at least two curves, got {}", curves.len())));
    }
    if v_params.len() != curves.len() {
        return Err(Error::invalid(format!(
            "{} skinning parameters for {} curves",
            v_params.len(),
            curves.len()
        )));
    }
    if degree_v == 0 || degree_v > curves.len() - 1 {
        return Err(Error::invalid(format!(
            "skinning degree {degree_v} not in 1..={}",
            curves.len() - 1
        )));
    }
    let first = &curves[0];
    for (k, c) in curves.iter().enumerate().skip(1) {
        if c.degree() != first.degree() || c.knots() != first.knots() {
            return Err(Error::invalid(format!(
                "curve {k} is not compatible with curve 0 (degree or knots differ)"
            )));
        }
    }
    let lu = collocation(v_params, degree_v, knots_v)?;
    let n = first.control_points().len();
    let grid: Vec<Vec<Point3<T>>> = (0..n)
        .map(|i| {
            let column: Vec<Point3<T>> = curves.iter().map(|c| c.control_points()[i]).collect();
            lu.solve_points(&column)
        })
        .collect();
    BSplineSurface::new(
        first.degree(),
        degree_v,
        first.knots().clone(),
        knots_v.clone(),
        grid,
    )
}

/// Interpolates `grid[l][k]` at `(u_params[l], v_params[k])` with the given
/// degrees and knot vectors.
pub fn tensor_interpolate<T: Real>(
    grid: &[Vec<Point3<T>>],
    u_params: &ParamList<T>,
    v_params: &ParamList<T>,
    degree_u: usize,
    degree_v: usize,
    knots_u: &KnotVector<T>,
    knots_v: &KnotVector<T>,
) -> Result<BSplineSurface<T>> {
    let nu = grid.len();
    let nv = grid.first().map_or(0, Vec::len);
    if grid.iter().any(|r| r.len() != nv) {
        return Err(Error::invalid("point grid rows differ in length"));
    }
    if u_params.len() != nu || v_params.len() != nv {
        return Err(Error::invalid(format!(
            "{nu}x{nv} grid but {} u-parameters and {} v-parameters",
            u_params.len(),
            v_params.len()
        )));
    }
    let lu_u = collocation(u_params, degree_u, knots_u)?;
    let lu_v = collocation(v_params, degree_v, knots_v)?;
    // rows along v first, then columns along u
    let rows: Vec<Vec<Point3<T>>> = grid.iter().map(|r| lu_v.solve_points(r)).collect();
    let mut out = vec![vec![Point3::zero(); nv]; nu];
    for j in 0..nv {
        let col: Vec<Point3<T>> = rows.iter().map(|r| r[j]).collect();
        for (i, p) in lu_u.solve_points(&col).into_iter().enumerate() {
            out[i][j] = p;
        }
    }
    BSplineSurface::new(degree_u, degree_v, knots_u.clone(), knots_v.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::{chord_length_params, interpolate_points, EndTangents};

    fn p3(x: f64, y: f64, z: f64) -> Point3<f64> {
        Point3::new(x, y, z)
    }

    fn segment(a: Point3<f64>, b: Point3<f64>) -> BSplineCurve<f64, 3> {
        BSplineCurve::new(1, KnotVector::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap(), vec![a, b]).unwrap()
    }

    #[test]
    fn ruled_surface_from_two_lines() {
        let c0 = segment(p3(0.0, 0.0, 0.0), p3(1.0, 0.0, 0.0));
        let c1 = segment(p3(0.0, 1.0, 1.0), p3(1.0, 1.0, 2.0));
        let s = skin_curves(&[c0.clone(), c1.clone()], &ParamList::uniform(2).unwrap(), 1).unwrap();
        for i in 0..=8 {
            let u = i as f64 / 8.0;
            let mid = c0.evaluate(u).unwrap().lerp(&c1.evaluate(u).unwrap(), 0.5);
            assert!(s.evaluate(u, 0.5).unwrap().distance(&mid) < 1e-15);
        }
    }

    #[test]
    fn single_curve_rejected() {
        let c0 = segment(p3(0.0, 0.0, 0.0), p3(1.0, 0.0, 0.0));
        let params = ParamList::new(vec![0.0]).unwrap();
        assert!(matches!(skin_curves(&[c0], &params, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn incompatible_curves_rejected() {
        let c0 = segment(p3(0.0, 0.0, 0.0), p3(1.0, 0.0, 0.0));
        let c1 = c0.elevate_degree(2).unwrap();
        assert!(matches!(
            skin_curves(&[c0, c1], &ParamList::uniform(2).unwrap(), 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn bilinear_tensor_patch() {
        let k = KnotVector::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let grid = vec![
            vec![p3(0.0, 0.0, 0.0), p3(0.0, 1.0, 0.0)],
            vec![p3(1.0, 0.0, 0.0), p3(1.0, 1.0, 0.0)],
        ];
        let p = ParamList::uniform(2).unwrap();
        let s = tensor_interpolate(&grid, &p, &p, 1, 1, &k, &k).unwrap();
        assert_eq!(s.control_grid(), grid.as_slice());
        assert_eq!(s.evaluate(0.25, 0.75).unwrap(), p3(0.25, 0.75, 0.0));
    }

    #[test]
    fn saddle_grid_reproduced() {
        let p = ParamList::new(vec![0.0, 0.4, 1.0]).unwrap();
        let grid: Vec<Vec<Point3<f64>>> = p
            .iter()
            .map(|&x| p.iter().map(|&y| p3(x, y, x * y)).collect())
            .collect();
        let k = KnotVector::averaged(&p, 2).unwrap();
        let s = tensor_interpolate(&grid, &p, &p, 2, 2, &k, &k).unwrap();
        for (l, &u) in p.iter().enumerate() {
            for (kk, &v) in p.iter().enumerate() {
                assert!(s.evaluate(u, v).unwrap().distance(&grid[l][kk]) < 1e-9);
            }
        }
    }

    #[test]
    fn transposed_inputs_transpose_output() {
        let pu = ParamList::new(vec![0.0, 0.3, 0.6, 1.0]).unwrap();
        let pv = ParamList::new(vec![0.0, 0.5, 1.0]).unwrap();
        let grid: Vec<Vec<Point3<f64>>> = pu
            .iter()
            .map(|&x| pv.iter().map(|&y| p3(x, y, (3.0 * x).sin() * y)).collect())
            .collect();
        let gt: Vec<Vec<Point3<f64>>> = (0..3).map(|j| (0..4).map(|i| grid[i][j]).collect()).collect();
        let ku = KnotVector::averaged(&pu, 3).unwrap();
        let kv = KnotVector::averaged(&pv, 2).unwrap();
        let s = tensor_interpolate(&grid, &pu, &pv, 3, 2, &ku, &kv).unwrap();
        let t = tensor_interpolate(&gt, &pv, &pu, 2, 3, &kv, &ku).unwrap();
        for i in 0..4 {
            for j in 0..3 {
                assert!(s.control_grid()[i][j].distance(&t.control_grid()[j][i]) < 1e-12);
            }
        }
    }

    #[test]
    fn duplicate_params_rejected() {
        assert!(ParamList::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn skinned_translates_recover_curves() {
        let pts: Vec<Point3<f64>> = (0..9)
            .map(|i| {
                let t = i as f64 / 8.0;
                p3(t, 0.0, 0.1 * (6.0 * t).sin())
            })
            .collect();
        let params = chord_length_params(&pts).unwrap();
        let base = interpolate_points(&pts, &params, 3, false, EndTangents::none()).unwrap();
        let curves: Vec<_> = (0..4)
            .map(|k| base.map_points(|p| *p + p3(0.1 * k as f64, k as f64, 0.05 * (k * k) as f64)))
            .collect();
        let vp = ParamList::new(vec![0.0, 0.3, 0.7, 1.0]).unwrap();
        let s = skin_curves(&curves, &vp, 3).unwrap();
        for (k, c) in curves.iter().enumerate() {
            for i in 0..64 {
                let u = i as f64 / 63.0;
                let d = s.evaluate(u, vp[k]).unwrap().distance(&c.evaluate(u).unwrap());
                assert!(d < 1e-9);
            }
        }
    }
}
