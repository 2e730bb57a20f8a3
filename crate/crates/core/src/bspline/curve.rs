use crate::bspline::basis::{basis_derivatives, basis_values, check_domain};
use crate::bspline::knots::KnotVector;
use crate::error::{Error, Result};
use crate::point::{BoundingBox, Point};
use crate::scalar::Real;

/// Polynomial B-spline curve with `D`-dimensional control points.
///
/// Periodic curves store the full unclamped control polygon including the
/// `degree` wrapped points; evaluation wraps parameters into the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct BSplineCurve<T, const D: usize> {
    degree: usize,
    knots: KnotVector<T>,
    control_points: Vec<Point<T, D>>,
    periodic: bool,
}

impl<T: Real, const D: usize> BSplineCurve<T, D> {
    pub fn new(
        degree: usize,
        knots: KnotVector<T>,
        control_points: Vec<Point<T, D>>,
    ) -> Result<Self> {
        Self::validate(degree, &knots, &control_points)?;
        Ok(BSplineCurve { degree, knots, control_points, periodic: false })
    }

    /// A periodic curve: `control_points` ends with copies of its first `degree` entries.
    pub fn new_periodic(
        degree: usize,
        knots: KnotVector<T>,
        control_points: Vec<Point<T, D>>,
    ) -> Result<Self> {
        Self::validate(degree, &knots, &control_points)?;
        let n = control_points.len();
        if n < 2 * degree + 1 && degree > 0 {
            return Err(Error::invalid("too few control points for a periodic curve"));
        }
        for i in 0..degree {
            if control_points[i] != control_points[n - degree + i] {
                return Err(Error::invalid(format!(
                    "periodic curve must repeat its first {degree} control points at the end"
                )));
            }
        }
        Ok(BSplineCurve { degree, knots, control_points, periodic: true })
    }

    fn validate(degree: usize, knots: &KnotVector<T>, cps: &[Point<T, D>]) -> Result<()> {
        let n = cps.len();
        if n < degree + 1 {
            return Err(Error::invalid(format!(
                "degree {degree} needs at least {} control points, got {n}",
                degree + 1
            )));
        }
        if knots.len() != n + degree + 1 {
            return Err(Error::invalid(format!(
                "knot count {} inconsistent with {n} control points of degree {degree} (expected {})",
                knots.len(),
                n + degree + 1
            )));
        }
        let (a, b) = knots.domain(degree);
        if !(a < b) {
            return Err(Error::invalid("curve domain is empty"));
        }
        for (v, m) in knots.distinct() {
            let limit =
                if v == knots.first() || v == knots.last() { degree + 1 } else { degree.max(1) };
            if m > limit {
                return Err(Error::invalid(format!(
                    "knot {v} has multiplicity {m}, exceeding {limit}"
                )));
            }
        }
        if cps.iter().any(|p| !p.is_finite()) {
            return Err(Error::invalid("control points must be finite"));
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &KnotVector<T> {
        &self.knots
    }

    pub fn control_points(&self) -> &[Point<T, D>] {
        &self.control_points
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn domain(&self) -> (T, T) {
        self.knots.domain(self.degree)
    }

    pub fn is_clamped(&self) -> bool {
        self.knots.is_clamped(self.degree)
    }

    pub fn control_bbox(&self) -> BoundingBox<T, D> {
        BoundingBox::from_points(&self.control_points).expect("curve has control points")
    }

    pub fn start_point(&self) -> Point<T, D> {
        self.point_at(self.domain().0)
    }

    pub fn end_point(&self) -> Point<T, D> {
        self.point_at(self.domain().1)
    }

    fn normalize_param(&self, u: T) -> Result<T> {
        let (a, b) = self.domain();
        if self.periodic {
            if !u.is_finite() {
                return Err(Error::Domain { value: u.as_f64(), start: a.as_f64(), end: b.as_f64() });
            }
            if u >= a && u <= b {
                return Ok(u);
            }
            let period = b - a;
            let mut w = (u - a) % period;
            if w < T::zero() {
                w += period;
            }
            return Ok(a + w);
        }
        check_domain(u, a, b)
    }

    /// Point at `u`, or a domain error.
    pub fn evaluate(&self, u: T) -> Result<Point<T, D>> {
        let u = self.normalize_param(u)?;
        Ok(self.point_at(u))
    }

    /// Evaluation without domain checks; `u` is clamped into the domain.
    pub(crate) fn point_at(&self, u: T) -> Point<T, D> {
        let (a, b) = self.domain();
        let u = u.max(a).min(b);
        let p = self.degree;
        let span = self.knots.find_span(p, u);
        let n = basis_values(self.knots.as_slice(), p, span, u);
        let mut out = Point::zero();
        for (j, w) in n.into_iter().enumerate() {
            out += self.control_points[span - p + j] * w;
        }
        out
    }

    /// Derivatives of orders `0..=order` at `u`.
    pub fn derivatives(&self, u: T, order: usize) -> Result<Vec<Point<T, D>>> {
        let u = self.normalize_param(u)?;
        Ok(self.derivatives_at(u, order))
    }

    pub(crate) fn derivatives_at(&self, u: T, order: usize) -> Vec<Point<T, D>> {
        let (a, b) = self.domain();
        let u = u.max(a).min(b);
        let p = self.degree;
        let span = self.knots.find_span(p, u);
        let ders = basis_derivatives(self.knots.as_slice(), p, span, u, order);
        ders.iter()
            .map(|row| {
                row.iter().enumerate().fold(Point::zero(), |acc, (j, &w)| {
                    acc + self.control_points[span - p + j] * w
                })
            })
            .collect()
    }

    /// The `order`-th derivative at `u` (`order >= 1`).
    pub fn derivative(&self, u: T, order: usize) -> Result<Point<T, D>> {
        if order == 0 {
            return Err(Error::invalid("derivative order must be at least 1"));
        }
        Ok(self.derivatives(u, order)?[order])
    }

    /// Curve with the same shape and the domain mapped affinely onto `[start, end]`.
    pub fn reparametrized_affine(&self, start: T, end: T) -> Result<Self> {
        if !(start < end) {
            return Err(Error::invalid("affine reparametrization needs start < end"));
        }
        let knots = self.knots.remapped(self.domain(), (start, end));
        Ok(BSplineCurve { knots, ..self.clone() })
    }

    /// The same point set traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let (a, b) = self.domain();
        let mut k: Vec<T> = self
            .knots
            .as_slice()
            .iter()
            .rev()
            .map(|&x| if x == a { b } else if x == b { a } else { a + b - x })
            .collect();
        // keep exact monotonicity when a + b - x rounds
        for i in 1..k.len() {
            if k[i] < k[i - 1] {
                k[i] = k[i - 1];
            }
        }
        let mut cps = self.control_points.clone();
        cps.reverse();
        BSplineCurve { degree: self.degree, knots: KnotVector(k), control_points: cps, periodic: self.periodic }
    }

    /// Applies `f` to every control point. Valid for affine maps.
    pub fn map_points<const E: usize>(
        &self,
        f: impl Fn(&Point<T, D>) -> Point<T, E>,
    ) -> BSplineCurve<T, E> {
        BSplineCurve {
            degree: self.degree,
            knots: self.knots.clone(),
            control_points: self.control_points.iter().map(f).collect(),
            periodic: self.periodic,
        }
    }

    /// Boehm knot insertion of `u` repeated `times`; `u` must lie strictly
    /// inside the domain and its final multiplicity may not exceed the degree.
    pub fn insert_knot(&self, u: T, times: usize) -> Result<Self> {
        let (a, b) = self.domain();
        if !(u > a && u < b) {
            return Err(Error::Domain { value: u.as_f64(), start: a.as_f64(), end: b.as_f64() });
        }
        let s = self.knots.multiplicity(u);
        if s + times > self.degree {
            return Err(Error::invalid(format!(
                "inserting {u} {times} times would raise its multiplicity to {}, above degree {}",
                s + times,
                self.degree
            )));
        }
        Ok(self.insert_knot_raw(u, times))
    }

    /// Inserts every value of `knots` (each occurrence once).
    pub fn refine(&self, knots: &[T]) -> Result<Self> {
        let mut c = self.clone();
        for &u in knots {
            c = c.insert_knot(u, 1)?;
        }
        Ok(c)
    }

    /// Boehm's algorithm without domain or multiplicity checks. `u` may equal
    /// an existing knot but must be smaller than the last knot.
    pub(crate) fn insert_knot_raw(&self, u: T, r: usize) -> Self {
        if r == 0 {
            return self.clone();
        }
        let p = self.degree;
        let up = self.knots.as_slice();
        let pw = &self.control_points;
        let np = pw.len() - 1;
        let mp = np + p + 1;
        let k = up.partition_point(|&x| x <= u) - 1;
        let s = self.knots.multiplicity(u).min(p);
        let r = r.min(p + 1 - s.min(p + 1));

        let mut uq = Vec::with_capacity(up.len() + r);
        uq.extend_from_slice(&up[..=k]);
        uq.extend(std::iter::repeat(u).take(r));
        uq.extend_from_slice(&up[k + 1..=mp]);

        let mut qw = vec![Point::zero(); np + 1 + r];
        qw[..=(k - p)].copy_from_slice(&pw[..=(k - p)]);
        for i in (k - s)..=np {
            qw[i + r] = pw[i];
        }
        let mut rw: Vec<Point<T, D>> = (0..=(p - s)).map(|i| pw[k - p + i]).collect();
        let mut l = 0;
        for j in 1..=r {
            l = k - p + j;
            for i in 0..=(p - j - s) {
                let alpha = (u - up[l + i]) / (up[i + k + 1] - up[l + i]);
                rw[i] = rw[i + 1] * alpha + rw[i] * (T::one() - alpha);
            }
            qw[l] = rw[0];
            qw[k + r - j - s] = rw[p - j - s];
        }
        for i in (l + 1)..(k - s) {
            qw[i] = rw[i - l];
        }
        BSplineCurve { degree: p, knots: KnotVector(uq), control_points: qw, periodic: false }
    }

    /// Converts an unclamped (e.g. periodic) curve to the equivalent clamped
    /// representation over the same domain.
    pub fn to_clamped(&self) -> Self {
        if self.is_clamped() {
            return BSplineCurve { periodic: false, ..self.clone() };
        }
        let start = self.clamp_start();
        start.reversed().clamp_start().reversed()
    }

    fn clamp_start(&self) -> Self {
        let p = self.degree;
        let (a, _) = self.domain();
        let s = self.knots.multiplicity(a);
        if self.knots.as_slice()[..=p].iter().all(|&k| k == a) {
            return BSplineCurve { periodic: false, ..self.clone() };
        }
        let c = if s < p { self.insert_knot_raw(a, p - s) } else { self.clone() };
        let k = c.knots.as_slice();
        let j = k.iter().position(|&x| x == a).expect("inserted knot present");
        let mut knots = vec![a];
        knots.extend_from_slice(&k[j..]);
        let cps = c.control_points[j - 1..].to_vec();
        BSplineCurve { degree: p, knots: KnotVector(knots), control_points: cps, periodic: false }
    }

    /// Exact degree elevation to `target` (Piegl–Tiller algorithm A5.9).
    pub fn elevate_degree(&self, target: usize) -> Result<Self> {
        if target < self.degree {
            return Err(Error::invalid(format!(
                "cannot elevate degree {} down to {target}",
                self.degree
            )));
        }
        let curve = self.to_clamped();
        if target == self.degree {
            return Ok(curve);
        }
        Ok(curve.elevate_clamped(target - self.degree))
    }

    fn elevate_clamped(&self, t: usize) -> Self {
        let p = self.degree;
        let u = self.knots.as_slice();
        let pw = &self.control_points;
        let n = pw.len() - 1;
        let m = n + p + 1;
        let ph = p + t;
        let ph2 = ph / 2;

        let bin = binomials::<T>(ph.max(p).max(t) + 1);
        let mut bezalfs = vec![vec![T::zero(); p + 1]; ph + 1];
        bezalfs[0][0] = T::one();
        bezalfs[ph][p] = T::one();
        for i in 1..=ph2 {
            let inv = T::one() / bin[ph][i];
            let mpi = p.min(i);
            for j in i.saturating_sub(t)..=mpi {
                bezalfs[i][j] = inv * bin[p][j] * bin[t][i - j];
            }
        }
        for i in (ph2 + 1)..ph {
            let mpi = p.min(i);
            for j in i.saturating_sub(t)..=mpi {
                bezalfs[i][j] = bezalfs[ph - i][p - j];
            }
        }

        let distinct_interior = self.knots.interior_distinct(p).len();
        let cap = pw.len() + (distinct_interior + 1) * t + 1;
        let mut qw = vec![Point::zero(); cap];
        let mut uh = vec![T::zero(); cap + ph + 1];
        let mut bpts = vec![Point::zero(); p + 1];
        let mut ebpts = vec![Point::zero(); ph + 1];
        let mut next_bpts = vec![Point::zero(); p.saturating_sub(1).max(1)];
        let mut alfs = vec![T::zero(); p.saturating_sub(1).max(1)];

        let mut mh = ph;
        let mut kind = ph + 1;
        let mut r: isize = -1;
        let mut a = p;
        let mut b = p + 1;
        let mut cind = 1usize;
        let mut ua = u[0];
        qw[0] = pw[0];
        for x in uh.iter_mut().take(ph + 1) {
            *x = ua;
        }
        bpts.copy_from_slice(&pw[..=p]);

        while b < m {
            let i0 = b;
            while b < m && u[b] == u[b + 1] {
                b += 1;
            }
            let mul = b - i0 + 1;
            mh += mul + t;
            let ub = u[b];
            let oldr = r;
            r = p as isize - mul as isize;
            let lbz = if oldr > 0 { ((oldr + 2) / 2) as usize } else { 1 };
            let rbz = if r > 0 { ph - ((r + 1) / 2) as usize } else { ph };
            if r > 0 {
                let numer = ub - ua;
                for k in ((mul + 1)..=p).rev() {
                    alfs[k - mul - 1] = numer / (u[a + k] - ua);
                }
                for j in 1..=(r as usize) {
                    let save = r as usize - j;
                    let s = mul + j;
                    for k in (s..=p).rev() {
                        let al = alfs[k - s];
                        bpts[k] = bpts[k] * al + bpts[k - 1] * (T::one() - al);
                    }
                    next_bpts[save] = bpts[p];
                }
            }
            for i in lbz..=ph {
                let mut acc = Point::zero();
                let mpi = p.min(i);
                for j in i.saturating_sub(t)..=mpi {
                    acc += bpts[j] * bezalfs[i][j];
                }
                ebpts[i] = acc;
            }
            if oldr > 1 {
                let mut first = kind as isize - 2;
                let mut last = kind as isize;
                let den = ub - ua;
                let bet = (ub - uh[kind - 1]) / den;
                for tr in 1..oldr {
                    let mut i = first;
                    let mut j = last;
                    let mut kj = j - kind as isize + 1;
                    while j - i > tr {
                        if i < cind as isize {
                            let iu = i as usize;
                            let alf = (ub - uh[iu]) / (ua - uh[iu]);
                            qw[iu] = qw[iu] * alf + qw[iu - 1] * (T::one() - alf);
                        }
                        if j >= lbz as isize {
                            let kju = kj as usize;
                            if j - tr <= kind as isize - ph as isize + oldr {
                                let gam = (ub - uh[(j - tr) as usize]) / den;
                                ebpts[kju] = ebpts[kju] * gam + ebpts[kju + 1] * (T::one() - gam);
                            } else {
                                ebpts[kju] = ebpts[kju] * bet + ebpts[kju + 1] * (T::one() - bet);
                            }
                        }
                        i += 1;
                        j -= 1;
                        kj -= 1;
                    }
                    first -= 1;
                    last += 1;
                }
            }
            if a != p {
                for _ in 0..(ph as isize - oldr) {
                    uh[kind] = ua;
                    kind += 1;
                }
            }
            for j in lbz..=rbz {
                qw[cind] = ebpts[j];
                cind += 1;
            }
            if b < m {
                let rr = r.max(0) as usize;
                bpts[..rr].copy_from_slice(&next_bpts[..rr]);
                for j in rr..=p {
                    bpts[j] = pw[b - p + j];
                }
                a = b;
                b += 1;
                ua = ub;
            } else {
                for i in 0..=ph {
                    uh[kind + i] = ub;
                }
            }
        }
        let nh = mh - ph - 1;
        qw.truncate(nh + 1);
        uh.truncate(nh + ph + 2);
        BSplineCurve { degree: ph, knots: KnotVector(uh), control_points: qw, periodic: false }
    }
}

fn binomials<T: Real>(n: usize) -> Vec<Vec<T>> {
    let mut b = vec![vec![T::zero(); n + 1]; n + 1];
    for i in 0..=n {
        b[i][0] = T::one();
        for j in 1..=i {
            b[i][j] = b[i - 1][j - 1] + if j < i { b[i - 1][j] } else { T::zero() };
        }
    }
    b
}
