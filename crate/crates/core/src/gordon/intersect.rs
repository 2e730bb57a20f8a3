//! Curve–curve intersection: Bézier subdivision isolates candidate
//! parameter boxes, bounded Gauss–Newton refines them.

use crate::bspline::BSplineCurve;
use crate::point::{BoundingBox, Point3};
use crate::scalar::Real;

/// Upper bound on refinement starts per curve pair.
const MAX_CANDIDATES: usize = 4096;
/// Parameter separation below which two solutions are the same intersection.
pub(crate) const SAME_PARAM: f64 = 1e-4;
/// Distance from a domain end within which a parameter snaps onto the end.
pub(crate) const END_SNAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Crossing<T> {
    pub s: T,
    pub t: T,
    pub distance: T,
}

#[derive(Clone, Debug)]
struct Piece<T> {
    t0: T,
    t1: T,
    ctrl: Vec<Point3<T>>,
    bbox: BoundingBox<T, 3>,
}

impl<T: Real> Piece<T> {
    fn new(t0: T, t1: T, ctrl: Vec<Point3<T>>) -> Self {
        let bbox = BoundingBox::from_points(&ctrl).expect("non-empty piece");
        Piece { t0, t1, ctrl, bbox }
    }

    fn split(&self) -> (Self, Self) {
        let half = T::lit(0.5);
        let n = self.ctrl.len();
        let mut work = self.ctrl.clone();
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        left.push(work[0]);
        right.push(work[n - 1]);
        for level in 1..n {
            for i in 0..n - level {
                work[i] = work[i].lerp(&work[i + 1], half);
            }
            left.push(work[0]);
            right.push(work[n - 1 - level]);
        }
        right.reverse();
        let mid = (self.t0 + self.t1) * half;
        (Piece::new(self.t0, mid, left), Piece::new(mid, self.t1, right))
    }

    fn mid(&self) -> T {
        (self.t0 + self.t1) * T::lit(0.5)
    }
}

/// Splits a clamped curve into its polynomial (Bézier) pieces.
fn bezier_pieces<T: Real>(curve: &BSplineCurve<T, 3>) -> Vec<Piece<T>> {
    let p = curve.degree();
    let mut c = curve.to_clamped();
    for (u, m) in c.knots().interior_distinct(p) {
        if m < p {
            c = c.insert_knot_raw(u, p - m);
        }
    }
    let breaks: Vec<T> = c.knots().distinct().into_iter().map(|(u, _)| u).collect();
    let cps = c.control_points();
    if p == 0 {
        return breaks
            .windows(2)
            .zip(cps)
            .map(|(w, q)| Piece::new(w[0], w[1], vec![*q]))
            .collect();
    }
    breaks
        .windows(2)
        .enumerate()
        .map(|(i, w)| Piece::new(w[0], w[1], cps[i * p..=i * p + p].to_vec()))
        .collect()
}

/// Intersection finder for one fixed curve pair.
pub(crate) struct PairIntersector<'a, T: Real> {
    pub a: &'a BSplineCurve<T, 3>,
    pub b: &'a BSplineCurve<T, 3>,
    pub tol: T,
    pub leaf_size: T,
}

impl<'a, T: Real> PairIntersector<'a, T> {
    /// All distinct intersections within `tol`, sorted by the first parameter.
    pub fn run(&self) -> Vec<Crossing<T>> {
        let pa = bezier_pieces(self.a);
        let pb = bezier_pieces(self.b);
        let mut starts = Vec::new();
        for x in &pa {
            for y in &pb {
                self.subdivide(x.clone(), y.clone(), 0, &mut starts);
            }
        }
        let mut found: Vec<Crossing<T>> = Vec::new();
        for (s0, t0) in starts {
            let c = self.refine(s0, t0);
            if c.distance <= self.tol {
                found.push(self.snap(c));
            }
        }
        dedup(found)
    }

    fn subdivide(&self, x: Piece<T>, y: Piece<T>, depth: usize, out: &mut Vec<(T, T)>) {
        if out.len() >= MAX_CANDIDATES || !x.bbox.intersects(&y.bbox, self.tol) {
            return;
        }
        let (dx, dy) = (x.bbox.diagonal(), y.bbox.diagonal());
        if depth >= 40 || (dx <= self.leaf_size && dy <= self.leaf_size) {
            out.push((x.mid(), y.mid()));
            return;
        }
        if dx >= dy {
            let (l, r) = x.split();
            self.subdivide(l, y.clone(), depth + 1, out);
            self.subdivide(r, y, depth + 1, out);
        } else {
            let (l, r) = y.split();
            self.subdivide(x.clone(), l, depth + 1, out);
            self.subdivide(x, r, depth + 1, out);
        }
    }

    fn residual(&self, s: T, t: T) -> T {
        (self.a.point_at(s) - self.b.point_at(t)).norm_squared()
    }

    /// Bounded Gauss–Newton on `|a(s) - b(t)|²` with backtracking.
    pub fn refine(&self, s0: T, t0: T) -> Crossing<T> {
        let (a0, a1) = self.a.domain();
        let (b0, b1) = self.b.domain();
        let (mut s, mut t) = (s0, t0);
        let mut f = self.residual(s, t);
        let tiny = T::epsilon() * T::epsilon();
        for _ in 0..80 {
            if f <= tiny {
                break;
            }
            let da = self.a.derivatives_at(s, 1);
            let db = self.b.derivatives_at(t, 1);
            let r = da[0] - db[0];
            let (ja, jb) = (da[1], db[1]);
            let a11 = ja.dot(&ja);
            let a12 = -ja.dot(&jb);
            let a22 = jb.dot(&jb);
            let g1 = ja.dot(&r);
            let g2 = -jb.dot(&r);
            let det = a11 * a22 - a12 * a12;
            let (mut ds, mut dt) = if det > T::lit(1e-14) * a11 * a22 {
                ((-g1 * a22 + g2 * a12) / det, (-g2 * a11 + g1 * a12) / det)
            } else {
                (
                    if a11 > T::zero() { -g1 / a11 } else { T::zero() },
                    if a22 > T::zero() { -g2 / a22 } else { T::zero() },
                )
            };
            let s_blocked = (s <= a0 && ds < T::zero()) || (s >= a1 && ds > T::zero());
            let t_blocked = (t <= b0 && dt < T::zero()) || (t >= b1 && dt > T::zero());
            if s_blocked && t_blocked {
                break;
            } else if s_blocked {
                ds = T::zero();
                dt = if a22 > T::zero() { -g2 / a22 } else { T::zero() };
            } else if t_blocked {
                dt = T::zero();
                ds = if a11 > T::zero() { -g1 / a11 } else { T::zero() };
            }
            let mut lambda = T::one();
            let mut accepted = None;
            while lambda > T::lit(1e-12) {
                let sn = (s + ds * lambda).max(a0).min(a1);
                let tn = (t + dt * lambda).max(b0).min(b1);
                let fnew = self.residual(sn, tn);
                if fnew < f {
                    accepted = Some((sn, tn, fnew));
                    break;
                }
                lambda = lambda * T::lit(0.5);
            }
            let Some((sn, tn, fnew)) = accepted else { break };
            let step = (sn - s).abs() + (tn - t).abs();
            s = sn;
            t = tn;
            f = fnew;
            if step <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        Crossing { s, t, distance: f.sqrt() }
    }

    fn snap(&self, c: Crossing<T>) -> Crossing<T> {
        let snap_to = |x: T, lo: T, hi: T| -> T {
            let eps = T::lit(END_SNAP) * (hi - lo);
            if (x - lo).abs() <= eps {
                lo
            } else if (hi - x).abs() <= eps {
                hi
            } else {
                x
            }
        };
        let (a0, a1) = self.a.domain();
        let (b0, b1) = self.b.domain();
        let s = snap_to(c.s, a0, a1);
        let t = snap_to(c.t, b0, b1);
        if (s, t) == (c.s, c.t) {
            return c;
        }
        let d = self.residual(s, t).sqrt();
        if d <= self.tol {
            Crossing { s, t, distance: d }
        } else {
            c
        }
    }

    /// Closest approach found from a coarse sampling followed by refinement.
    pub fn closest(&self, samples: usize) -> Crossing<T> {
        let n = samples.max(2);
        let (a0, a1) = self.a.domain();
        let (b0, b1) = self.b.domain();
        let at = |lo: T, hi: T, i: usize| lo + (hi - lo) * T::from_count(i) / T::from_count(n - 1);
        let pa: Vec<(T, Point3<T>)> = (0..n).map(|i| at(a0, a1, i)).map(|s| (s, self.a.point_at(s))).collect();
        let pb: Vec<(T, Point3<T>)> = (0..n).map(|i| at(b0, b1, i)).map(|t| (t, self.b.point_at(t))).collect();
        let mut best = (a0, b0, T::infinity());
        for (s, p) in &pa {
            for (t, q) in &pb {
                let d = p.distance(q);
                if d < best.2 {
                    best = (*s, *t, d);
                }
            }
        }
        let c = self.refine(best.0, best.1);
        if c.distance <= best.2 {
            c
        } else {
            Crossing { s: best.0, t: best.1, distance: best.2 }
        }
    }
}

/// Merges solutions closer than [`SAME_PARAM`] in both parameters, keeping
/// the one with the smallest distance.
fn dedup<T: Real>(mut found: Vec<Crossing<T>>) -> Vec<Crossing<T>> {
    found.sort_by(|x, y| x.distance.partial_cmp(&y.distance).unwrap_or(std::cmp::Ordering::Equal));
    let same = T::lit(SAME_PARAM);
    let mut out: Vec<Crossing<T>> = Vec::new();
    for c in found {
        if !out.iter().any(|o| (o.s - c.s).abs() <= same && (o.t - c.t).abs() <= same) {
            out.push(c);
        }
    }
    out.sort_by(|x, y| x.s.partial_cmp(&y.s).unwrap_or(std::cmp::Ordering::Equal));
    out
}
