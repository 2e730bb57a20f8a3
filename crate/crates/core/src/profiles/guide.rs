//! Guide curves: points in local (α, β, γ) coordinates between two
//! profiles, and piecewise guides whose parts are joined under continuity
//! conditions.

use std::collections::VecDeque;

use crate::bspline::{chord_length_params, interpolate_points, BSplineCurve, EndTangents, KnotVector};
use crate::error::{Error, Result};
use crate::point::Point3;
use crate::scalar::Real;

/// Local guide-point coordinates. `alpha` runs from the start profile (0)
/// to the end profile (1); `beta` and `gamma` are offsets in units of the
/// local reference length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GuidePointLocal<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
}

/// Maps local coordinates to 3-D. The β axis is `beta_dir` made orthogonal
/// to the start–end axis; the γ axis is `axis × β`. The reference length
/// is interpolated linearly from `c_start` to `c_end`.
pub fn guide_point_to_3d<T: Real>(
    start: Point3<T>,
    end: Point3<T>,
    local: GuidePointLocal<T>,
    c_start: T,
    c_end: T,
    beta_dir: Point3<T>,
) -> Result<Point3<T>> {
    if !(local.alpha >= T::zero() && local.alpha <= T::one()) {
        return Err(Error::invalid(format!("alpha = {} outside [0, 1]", local.alpha)));
    }
    let span = end - start;
    let len = span.norm();
    let eps = T::epsilon() * T::lit(1e3);
    if !(len > eps * start.max_abs().max(end.max_abs()).max(T::one())) {
        return Err(Error::invalid("guide start and end points coincide"));
    }
    let axis = span * (T::one() / len);
    let along = beta_dir - axis * beta_dir.dot(&axis);
    let beta_axis = along
        .normalized(T::lit(1e-9) * beta_dir.norm())
        .ok_or_else(|| Error::invalid("beta direction is parallel to the guide axis"))?;
    let gamma_axis = axis.cross(&beta_axis);
    let c = c_start * (T::one() - local.alpha) + c_end * local.alpha;
    Ok(start + span * local.alpha + beta_axis * (local.beta * c) + gamma_axis * (local.gamma * c))
}

/// How a guide part connects to its previous (inner) neighbour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContinuityCondition {
    /// Position only; the junction may be a kink.
    C0,
    /// The part starts with the end tangent of its previous part.
    C1FromPrevious,
    /// The previous part ends with the start tangent of this part.
    C1ToPrevious,
    /// Requested as C2 but enforced as C1FromPrevious.
    C2FromPrevious,
    /// Requested as C2 but enforced as C1ToPrevious.
    C2ToPrevious,
}

impl ContinuityCondition {
    fn from_previous(self) -> bool {
        matches!(self, Self::C1FromPrevious | Self::C2FromPrevious)
    }

    fn to_previous(self) -> bool {
        matches!(self, Self::C1ToPrevious | Self::C2ToPrevious)
    }
}

/// Link of a guide part to the part it continues, by index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartLink {
    pub previous: Option<usize>,
    pub condition: ContinuityCondition,
}

impl PartLink {
    pub fn first() -> Self {
        PartLink { previous: None, condition: ContinuityCondition::C0 }
    }

    pub fn after(previous: usize, condition: ContinuityCondition) -> Self {
        PartLink { previous: Some(previous), condition }
    }
}

/// Indices of the parts in an order where every part comes after the
/// parts whose tangents it consumes. Ties keep input order.
pub fn order_guide_parts(links: &[PartLink]) -> Result<Vec<usize>> {
    let n = links.len();
    // deps[i] lists the parts that must be processed before part i
    let mut deps: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, link) in links.iter().enumerate() {
        let Some(p) = link.previous else { continue };
        if p >= n || p == i {
            return Err(Error::invalid(format!("part {i} names invalid previous part {p}")));
        }
        if link.condition.from_previous() {
            deps[i].push(p);
        } else if link.condition.to_previous() {
            deps[p].push(i);
        }
    }
    let mut indegree: Vec<usize> = deps.iter().map(Vec::len).collect();
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, d) in deps.iter().enumerate() {
        for &j in d {
            users[j].push(i);
        }
    }
    let mut ready: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_front() {
        order.push(i);
        let mut freed: Vec<usize> = Vec::new();
        for &u in &users[i] {
            indegree[u] -= 1;
            if indegree[u] == 0 {
                freed.push(u);
            }
        }
        ready.extend(freed);
        ready.make_contiguous().sort_unstable();
    }
    if order.len() < n {
        return Err(Error::Cycle { cycle: find_cycle(&deps, &indegree) });
    }
    Ok(order)
}

/// Walks dependency edges among unresolved parts until a node repeats.
fn find_cycle(deps: &[Vec<usize>], indegree: &[usize]) -> Vec<usize> {
    let start = indegree.iter().position(|&d| d > 0).expect("unresolved part");
    let mut path = vec![start];
    let mut at = start;
    loop {
        let next = *deps[at].iter().find(|&&j| indegree[j] > 0).expect("cycle continues");
        if let Some(pos) = path.iter().position(|&p| p == next) {
            let mut cycle = path[pos..].to_vec();
            cycle.reverse();
            return cycle;
        }
        path.push(next);
        at = next;
    }
}

/// Interpolates every part (in input order in the output) with tangents
/// handed across C1 junctions. Each part needs at least two points and
/// must start where its previous part ends.
pub fn assemble_guide<T: Real>(parts: &[Vec<Point3<T>>], links: &[PartLink]) -> Result<Vec<BSplineCurve<T, 3>>> {
    if parts.len() != links.len() {
        return Err(Error::invalid(format!("{} parts but {} links", parts.len(), links.len())));
    }
    for (i, p) in parts.iter().enumerate() {
        if p.len() < 2 {
            return Err(Error::invalid(format!("guide part {i} needs at least two points")));
        }
    }
    for (i, link) in links.iter().enumerate() {
        if let Some(prev) = link.previous.filter(|&p| p < parts.len()) {
            let a = *parts[prev].last().expect("non-empty");
            let b = parts[i][0];
            if a.distance(&b) > T::lit(1e-9) {
                return Err(Error::invalid(format!(
                    "guide part {i} starts {} away from the end of part {prev}",
                    a.distance(&b)
                )));
            }
        }
    }
    let order = order_guide_parts(links)?;
    let mut curves: Vec<Option<BSplineCurve<T, 3>>> = vec![None; parts.len()];
    for &i in &order {
        let pts = &parts[i];
        let params = chord_length_params(pts)?;
        let chord: T = pts.windows(2).map(|w| w[0].distance(&w[1])).sum();
        let link = links[i];
        let mut tangents = EndTangents::none();
        if let (Some(p), true) = (link.previous, link.condition.from_previous()) {
            let prev = curves[p].as_ref().expect("ordered before");
            tangents.start = Some(unit_end_tangent(prev, true)? * chord);
        }
        if let Some(next) = (0..parts.len())
            .find(|&j| links[j].previous == Some(i) && links[j].condition.to_previous())
        {
            let c = curves[next].as_ref().expect("ordered before");
            tangents.end = Some(unit_end_tangent(c, false)? * chord);
        }
        let k = tangents.start.is_some() as usize + tangents.end.is_some() as usize;
        let degree = 3.min(pts.len() + k - 1);
        curves[i] = Some(interpolate_points(pts, &params, degree, false, tangents)?);
    }
    Ok(curves.into_iter().map(|c| c.expect("every part interpolated")).collect())
}

fn unit_end_tangent<T: Real>(c: &BSplineCurve<T, 3>, at_end: bool) -> Result<Point3<T>> {
    let (a, b) = c.domain();
    let d = c.derivatives_at(if at_end { b } else { a }, 1)[1];
    d.normalized(T::epsilon())
        .ok_or_else(|| Error::Numeric("guide part has a vanishing end tangent".into()))
}

/// Concatenates curves that meet end to start into one clamped curve on
/// `[0, 1]`, splitting the domain by control-polygon length. Junctions
/// become knots of full multiplicity.
pub fn join_curves<T: Real>(curves: &[BSplineCurve<T, 3>]) -> Result<BSplineCurve<T, 3>> {
    let Some(first) = curves.first() else {
        return Err(Error::invalid("nothing to join"));
    };
    if curves.len() == 1 {
        return first.to_clamped().reparametrized_affine(T::zero(), T::one());
    }
    let degree = curves.iter().map(BSplineCurve::degree).max().unwrap_or(1).max(1);
    let lengths: Vec<T> = curves
        .iter()
        .map(|c| {
            let cps = c.control_points();
            cps.windows(2).map(|w| w[0].distance(&w[1])).sum::<T>()
        })
        .collect();
    let total: T = lengths.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(Error::invalid("joined curves have zero length"));
    }
    let mut bounds = vec![T::zero()];
    let mut acc = T::zero();
    for (i, l) in lengths.iter().enumerate() {
        acc += *l;
        bounds.push(if i + 1 == lengths.len() { T::one() } else { acc / total });
    }
    let mut knots = vec![T::zero(); degree + 1];
    let mut points: Vec<Point3<T>> = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        let (a, b) = (bounds[i], bounds[i + 1]);
        if !(b > a) {
            return Err(Error::invalid(format!("curve {i} has zero length")));
        }
        let c = c.to_clamped().elevate_degree(degree)?.reparametrized_affine(a, b)?;
        let ks = c.knots().as_slice();
        knots.extend_from_slice(&ks[degree + 1..ks.len() - degree - 1]);
        knots.extend(std::iter::repeat(b).take(if i + 1 == curves.len() { degree + 1 } else { degree }));
        let cps = c.control_points();
        match points.last_mut() {
            None => points.extend_from_slice(cps),
            Some(last) => {
                if last.distance(&cps[0]) > T::lit(1e-9) {
                    return Err(Error::invalid(format!(
                        "curve {i} does not start where curve {} ends",
                        i - 1
                    )));
                }
                *last = last.lerp(&cps[0], T::lit(0.5));
                points.extend_from_slice(&cps[1..]);
            }
        }
    }
    BSplineCurve::new(degree, KnotVector::new(knots)?, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ContinuityCondition::*;

    fn p3(x: f64, y: f64, z: f64) -> Point3<f64> {
        Point3::new(x, y, z)
    }

    #[test]
    fn axis_move() {
        let local = GuidePointLocal { alpha: 0.25, beta: 0.0, gamma: 0.0 };
        let p = guide_point_to_3d(p3(0., 0., 0.), p3(10., 0., 0.), local, 1.0, 1.0, p3(0., 0., 1.)).unwrap();
        assert_eq!(p, p3(2.5, 0.0, 0.0));
    }

    #[test]
    fn beta_offset_scales_with_length() {
        let local = GuidePointLocal { alpha: 0.5, beta: 0.1, gamma: 0.0 };
        let p = guide_point_to_3d(p3(0., 0., 0.), p3(0., 10., 0.), local, 2.0, 4.0, p3(1., 0., 0.)).unwrap();
        assert!(p.distance(&p3(0.3, 5.0, 0.0)) < 1e-15);
    }

    #[test]
    fn oblique_beta_direction_is_orthogonalized() {
        let local = GuidePointLocal { alpha: 0.3, beta: 0.2, gamma: 0.2 };
        let (s, e) = (p3(0., 0., 0.), p3(0., 4., 0.));
        let p = guide_point_to_3d(s, e, local, 1.0, 1.0, p3(1., 1., 0.)).unwrap();
        // axis y, beta x, gamma = y × x = -z
        assert!(p.distance(&p3(0.2, 1.2, -0.2)) < 1e-15, "{p:?}");
    }

    #[test]
    fn parallel_beta_direction() {
        let local = GuidePointLocal { alpha: 0.3, beta: 0.2, gamma: 0.2 };
        let r = guide_point_to_3d(p3(0., 0., 0.), p3(1., 0., 0.), local, 1.0, 1.0, p3(-2., 0., 0.));
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn no_conditions_keep_order() {
        let links = vec![PartLink::first(), PartLink::after(0, C0), PartLink::after(1, C0)];
        assert_eq!(order_guide_parts(&links).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn two_cycle() {
        let links = vec![PartLink::after(1, C1FromPrevious), PartLink::after(0, C1FromPrevious)];
        match order_guide_parts(&links) {
            Err(Error::Cycle { cycle }) => {
                let mut c = cycle.clone();
                c.sort();
                assert_eq!(c, vec![0, 1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kink_is_kept_at_c0() {
        let parts = vec![vec![p3(0., 0., 0.), p3(1., 0., 0.)], vec![p3(1., 0., 0.), p3(1., 1., 0.)]];
        let links = vec![PartLink::first(), PartLink::after(0, C0)];
        let c = assemble_guide(&parts, &links).unwrap();
        let t0 = c[0].derivative(1.0, 1).unwrap();
        let t1 = c[1].derivative(0.0, 1).unwrap();
        assert!(t0.cross(&t1).norm() > 0.5);
        let joined = join_curves(&c).unwrap();
        assert_eq!(joined.degree(), 1);
        assert!(joined.point_at(0.5).distance(&p3(1., 0., 0.)) < 1e-15);
    }

    #[test]
    fn tangent_handed_forward() {
        let parts = vec![
            vec![p3(0., 0., 0.), p3(1., 0.5, 0.), p3(2., 0., 0.)],
            vec![p3(2., 0., 0.), p3(3., 1., 0.)],
        ];
        let links = vec![PartLink::first(), PartLink::after(0, C1FromPrevious)];
        let c = assemble_guide(&parts, &links).unwrap();
        let t0 = c[0].derivative(1.0, 1).unwrap().normalized(0.0).unwrap();
        let t1 = c[1].derivative(0.0, 1).unwrap().normalized(0.0).unwrap();
        assert!(t0.distance(&t1) < 1e-12);
        let joined = join_curves(&c).unwrap();
        assert_eq!(joined.start_point(), p3(0., 0., 0.));
        assert_eq!(joined.end_point(), p3(3., 1., 0.));
    }

    #[test]
    fn junction_mismatch() {
        let parts = vec![vec![p3(0., 0., 0.), p3(1., 0., 0.)], vec![p3(1., 1e-6, 0.), p3(2., 0., 0.)]];
        let links = vec![PartLink::first(), PartLink::after(0, C0)];
        assert!(matches!(assemble_guide(&parts, &links), Err(Error::InvalidArgument(_))));
    }
}
