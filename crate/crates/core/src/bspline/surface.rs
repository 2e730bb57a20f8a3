use crate::bspline::basis::{basis_values, check_domain};
use crate::bspline::curve::BSplineCurve;
use crate::bspline::knots::KnotVector;
use crate::error::{Error, Result};
use crate::point::{BoundingBox, Point3};
use crate::scalar::Real;

/// Tensor-product B-spline surface. `control_grid[i][j]` pairs the `i`-th
/// u-basis function with the `j`-th v-basis function.
#[derive(Clone, Debug, PartialEq)]
pub struct BSplineSurface<T> {
    degree_u: usize,
    degree_v: usize,
    knots_u: KnotVector<T>,
    knots_v: KnotVector<T>,
    control_grid: Vec<Vec<Point3<T>>>,
}

impl<T: Real> BSplineSurface<T> {
    pub fn new(
        degree_u: usize,
        degree_v: usize,
        knots_u: KnotVector<T>,
        knots_v: KnotVector<T>,
        control_grid: Vec<Vec<Point3<T>>>,
    ) -> Result<Self> {
        let nu = control_grid.len();
        let nv = control_grid.first().map_or(0, Vec::len);
        if control_grid.iter().any(|row| row.len() != nv) {
            return Err(Error::invalid("control grid rows differ in length"));
        }
        if nu < degree_u + 1 || nv < degree_v + 1 {
            return Err(Error::invalid(format!(
                "{nu}x{nv} control grid too small for degrees ({degree_u}, {degree_v})"
            )));
        }
        if knots_u.len() != nu + degree_u + 1 || knots_v.len() != nv + degree_v + 1 {
            return Err(Error::invalid(format!(
                "knot counts ({}, {}) inconsistent with {nu}x{nv} grid and degrees ({degree_u}, {degree_v})",
                knots_u.len(),
                knots_v.len()
            )));
        }
        let (a, b) = knots_u.domain(degree_u);
        let (c, d) = knots_v.domain(degree_v);
        if !(a < b && c < d) {
            return Err(Error::invalid("surface domain is empty"));
        }
        if control_grid.iter().flatten().any(|p| !p.is_finite()) {
            return Err(Error::invalid("control points must be finite"));
        }
        Ok(BSplineSurface { degree_u, degree_v, knots_u, knots_v, control_grid })
    }

    pub fn degree_u(&self) -> usize {
        self.degree_u
    }

    pub fn degree_v(&self) -> usize {
        self.degree_v
    }

    pub fn knots_u(&self) -> &KnotVector<T> {
        &self.knots_u
    }

    pub fn knots_v(&self) -> &KnotVector<T> {
        &self.knots_v
    }

    pub fn control_grid(&self) -> &[Vec<Point3<T>>] {
        &self.control_grid
    }

    pub fn control_counts(&self) -> (usize, usize) {
        (self.control_grid.len(), self.control_grid[0].len())
    }

    pub fn domain_u(&self) -> (T, T) {
        self.knots_u.domain(self.degree_u)
    }

    pub fn domain_v(&self) -> (T, T) {
        self.knots_v.domain(self.degree_v)
    }

    pub fn control_bbox(&self) -> BoundingBox<T, 3> {
        BoundingBox::from_points(self.control_grid.iter().flatten()).expect("non-empty grid")
    }

    pub fn evaluate(&self, u: T, v: T) -> Result<Point3<T>> {
        let (a, b) = self.domain_u();
        let (c, d) = self.domain_v();
        let u = check_domain(u, a, b)?;
        let v = check_domain(v, c, d)?;
        Ok(self.point_at(u, v))
    }

    pub(crate) fn point_at(&self, u: T, v: T) -> Point3<T> {
        let (pu, pv) = (self.degree_u, self.degree_v);
        let su = self.knots_u.find_span(pu, u);
        let sv = self.knots_v.find_span(pv, v);
        let nu = basis_values(self.knots_u.as_slice(), pu, su, u);
        let nv = basis_values(self.knots_v.as_slice(), pv, sv, v);
        let mut out = Point3::zero();
        for (k, wu) in nu.iter().enumerate() {
            let row = &self.control_grid[su - pu + k];
            let mut tmp = Point3::zero();
            for (l, wv) in nv.iter().enumerate() {
                tmp += row[sv - pv + l] * *wv;
            }
            out += tmp * *wu;
        }
        out
    }

    /// Isocurve `u ↦ s(u, v)`.
    pub fn isocurve_u(&self, v: T) -> Result<BSplineCurve<T, 3>> {
        let (c, d) = self.domain_v();
        let v = check_domain(v, c, d)?;
        let pv = self.degree_v;
        let sv = self.knots_v.find_span(pv, v);
        let nv = basis_values(self.knots_v.as_slice(), pv, sv, v);
        let cps = self
            .control_grid
            .iter()
            .map(|row| {
                nv.iter().enumerate().fold(Point3::zero(), |acc, (l, w)| acc + row[sv - pv + l] * *w)
            })
            .collect();
        BSplineCurve::new(self.degree_u, self.knots_u.clone(), cps)
    }

    /// Isocurve `v ↦ s(u, v)`.
    pub fn isocurve_v(&self, u: T) -> Result<BSplineCurve<T, 3>> {
        self.transposed().isocurve_u(u)
    }

    /// Swaps the roles of `u` and `v`.
    pub fn transposed(&self) -> Self {
        let (nu, nv) = self.control_counts();
        let grid = (0..nv).map(|j| (0..nu).map(|i| self.control_grid[i][j]).collect()).collect();
        BSplineSurface {
            degree_u: self.degree_v,
            degree_v: self.degree_u,
            knots_u: self.knots_v.clone(),
            knots_v: self.knots_u.clone(),
            control_grid: grid,
        }
    }

    /// Applies a curve operation to every column of control points along `u`.
    fn map_u_columns(
        &self,
        op: impl Fn(&BSplineCurve<T, 3>) -> Result<BSplineCurve<T, 3>>,
    ) -> Result<Self> {
        let (nu, nv) = self.control_counts();
        let mut columns = Vec::with_capacity(nv);
        for j in 0..nv {
            let col: Vec<Point3<T>> = (0..nu).map(|i| self.control_grid[i][j]).collect();
            let curve = BSplineCurve::new(self.degree_u, self.knots_u.clone(), col)?;
            columns.push(op(&curve)?);
        }
        let first = &columns[0];
        let (degree_u, knots_u) = (first.degree(), first.knots().clone());
        let new_nu = first.control_points().len();
        let grid = (0..new_nu)
            .map(|i| columns.iter().map(|c| c.control_points()[i]).collect())
            .collect();
        Ok(BSplineSurface {
            degree_u,
            degree_v: self.degree_v,
            knots_u,
            knots_v: self.knots_v.clone(),
            control_grid: grid,
        })
    }

    pub fn insert_knot_u(&self, u: T, times: usize) -> Result<Self> {
        self.map_u_columns(|c| c.insert_knot(u, times))
    }

    pub fn insert_knot_v(&self, v: T, times: usize) -> Result<Self> {
        Ok(self.transposed().insert_knot_u(v, times)?.transposed())
    }

    pub fn elevate_degree_u(&self, target: usize) -> Result<Self> {
        self.map_u_columns(|c| c.elevate_degree(target))
    }

    pub fn elevate_degree_v(&self, target: usize) -> Result<Self> {
        Ok(self.transposed().elevate_degree_u(target)?.transposed())
    }

    /// Inserts the listed knots along `u` and `v` (each occurrence once).
    pub fn refine(&self, knots_u: &[T], knots_v: &[T]) -> Result<Self> {
        let s = if knots_u.is_empty() { self.clone() } else { self.map_u_columns(|c| c.refine(knots_u))? };
        if knots_v.is_empty() {
            return Ok(s);
        }
        Ok(s.transposed().map_u_columns(|c| c.refine(knots_v))?.transposed())
    }

    /// Applies `f` to every control point. Valid for affine maps.
    pub fn map_points(&self, f: impl Fn(&Point3<T>) -> Point3<T>) -> Self {
        BSplineSurface {
            control_grid: self.control_grid.iter().map(|r| r.iter().map(&f).collect()).collect(),
            ..self.clone()
        }
    }
}
