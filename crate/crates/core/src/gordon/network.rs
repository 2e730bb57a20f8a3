use crate::bspline::{BSplineCurve, ParamList};
use crate::error::{Error, Result};
use crate::gordon::intersect::PairIntersector;
use crate::point::{BoundingBox, Point3};
use crate::scalar::Real;

/// Profiles run along `u`, guides along `v`. Every profile must cross every
/// guide exactly once, and the outermost curves of each family must meet
/// the other family at its ends.
#[derive(Clone, Debug)]
pub struct CurveNetwork<T: Real> {
    profiles: Vec<BSplineCurve<T, 3>>,
    guides: Vec<BSplineCurve<T, 3>>,
}

impl<T: Real> CurveNetwork<T> {
    pub fn new(profiles: Vec<BSplineCurve<T, 3>>, guides: Vec<BSplineCurve<T, 3>>) -> Result<Self> {
        if profiles.len() < 2 || guides.len() < 2 {
            return Err(Error::Network(format!(
                "a network needs at least two profiles and two guides, got {} and {}",
                profiles.len(),
                guides.len()
            )));
        }
        Ok(CurveNetwork { profiles, guides })
    }

    pub fn profiles(&self) -> &[BSplineCurve<T, 3>] {
        &self.profiles
    }

    pub fn guides(&self) -> &[BSplineCurve<T, 3>] {
        &self.guides
    }

    pub fn bbox(&self) -> BoundingBox<T, 3> {
        self.profiles
            .iter()
            .chain(&self.guides)
            .map(BSplineCurve::control_bbox)
            .reduce(|a, b| a.merge(&b))
            .expect("network has curves")
    }

    /// Bounding-box diagonal, the length scale for all tolerances.
    pub fn diagonal(&self) -> T {
        self.bbox().diagonal()
    }

    /// Copies of all curves clamped and affinely mapped onto `[0, 1]`.
    pub fn normalized(&self) -> Result<Self> {
        let norm = |c: &BSplineCurve<T, 3>| c.to_clamped().reparametrized_affine(T::zero(), T::one());
        Ok(CurveNetwork {
            profiles: self.profiles.iter().map(norm).collect::<Result<_>>()?,
            guides: self.guides.iter().map(norm).collect::<Result<_>>()?,
        })
    }
}

/// Intersection parameters and points, indexed `[k][l]` for profile `k`
/// and guide `l`.
#[derive(Clone, Debug)]
pub struct IntersectionGrid<T> {
    /// Profile parameter of each intersection.
    pub u_tilde: Vec<Vec<T>>,
    /// Guide parameter of each intersection.
    pub v_tilde: Vec<Vec<T>>,
    /// Midpoint between the profile and guide points.
    pub points: Vec<Vec<Point3<T>>>,
    /// Gap between the profile and guide points.
    pub gaps: Vec<Vec<T>>,
    /// Per-guide mean of `u_tilde`, one entry per guide.
    pub u_avg: ParamList<T>,
    /// Per-profile mean of `v_tilde`, one entry per profile.
    pub v_avg: ParamList<T>,
}

impl<T: Real> IntersectionGrid<T> {
    pub fn profile_count(&self) -> usize {
        self.u_tilde.len()
    }

    pub fn guide_count(&self) -> usize {
        self.u_tilde.first().map_or(0, Vec::len)
    }
}

/// Intersects every profile with every guide of a network whose curves
/// are already on `[0, 1]`.
pub fn compute_intersections<T: Real>(network: &CurveNetwork<T>, tol: T) -> Result<IntersectionGrid<T>> {
    let profiles = network.profiles();
    let guides = network.guides();
    let (n, m) = (profiles.len(), guides.len());
    for c in profiles.iter().chain(guides) {
        if c.domain() != (T::zero(), T::one()) {
            return Err(Error::invalid("intersection needs curves normalized to [0, 1]"));
        }
    }
    let diag = network.diagonal();
    let leaf = diag * T::lit(1e-3);
    let closed = |c: &BSplineCurve<T, 3>| c.start_point().distance(&c.end_point()) <= tol;

    let mut u_tilde = vec![vec![T::zero(); m]; n];
    let mut v_tilde = vec![vec![T::zero(); m]; n];
    let mut points = vec![vec![Point3::zero(); m]; n];
    let mut gaps = vec![vec![T::zero(); m]; n];
    for (k, f) in profiles.iter().enumerate() {
        for (l, g) in guides.iter().enumerate() {
            let finder = PairIntersector { a: f, b: g, tol, leaf_size: leaf };
            let mut found = finder.run();
            if found.len() > 1 {
                // a closed curve meets its seam partners at both ends; keep
                // the end that matches the partner's position in its family
                if closed(f) && l == 0 {
                    found.retain(|c| c.s != T::one());
                } else if closed(f) && l == m - 1 {
                    found.retain(|c| c.s != T::zero());
                }
                if closed(g) && k == 0 {
                    found.retain(|c| c.t != T::one());
                } else if closed(g) && k == n - 1 {
                    found.retain(|c| c.t != T::zero());
                }
            }
            match found.as_slice() {
                [] => {
                    let c = finder.closest(64);
                    return Err(Error::NoIntersection {
                        profile: k,
                        guide: l,
                        distance: c.distance.as_f64(),
                    });
                }
                [c] => {
                    u_tilde[k][l] = c.s;
                    v_tilde[k][l] = c.t;
                    let (p, q) = (f.point_at(c.s), g.point_at(c.t));
                    points[k][l] = p.lerp(&q, T::lit(0.5));
                    gaps[k][l] = c.distance;
                }
                many => {
                    return Err(Error::AmbiguousIntersection { profile: k, guide: l, count: many.len() })
                }
            }
        }
    }
    check_layout(&u_tilde, &v_tilde)?;

    let u_mean: Vec<T> = (0..m)
        .map(|l| u_tilde.iter().map(|row| row[l]).sum::<T>() / T::from_count(n))
        .collect();
    let v_mean: Vec<T> = v_tilde.iter().map(|row| row.iter().copied().sum::<T>() / T::from_count(m)).collect();
    Ok(IntersectionGrid {
        u_tilde,
        v_tilde,
        points,
        gaps,
        u_avg: rescaled(u_mean)?,
        v_avg: rescaled(v_mean)?,
    })
}

fn rescaled<T: Real>(mut v: Vec<T>) -> Result<ParamList<T>> {
    let (a, b) = (v[0], v[v.len() - 1]);
    for x in &mut v {
        *x = (*x - a) / (b - a);
    }
    let last = v.len() - 1;
    v[0] = T::zero();
    v[last] = T::one();
    ParamList::new(v)
}

fn check_layout<T: Real>(u: &[Vec<T>], v: &[Vec<T>]) -> Result<()> {
    let (n, m) = (u.len(), u[0].len());
    for k in 0..n {
        if u[k][0] != T::zero() || u[k][m - 1] != T::one() {
            return Err(Error::Network(format!(
                "profile {k} is not bounded by the first and last guide: it meets them at u = {} and u = {}",
                u[k][0],
                u[k][m - 1]
            )));
        }
        if let Some(l) = (1..m).find(|&l| u[k][l] <= u[k][l - 1]) {
            return Err(Error::Network(format!(
                "guides {} and {l} cross profile {k} out of order (u = {} then {})",
                l - 1,
                u[k][l - 1],
                u[k][l]
            )));
        }
    }
    for l in 0..m {
        if v[0][l] != T::zero() || v[n - 1][l] != T::one() {
            return Err(Error::Network(format!(
                "guide {l} is not bounded by the first and last profile: it meets them at v = {} and v = {}",
                v[0][l],
                v[n - 1][l]
            )));
        }
        if let Some(k) = (1..n).find(|&k| v[k][l] <= v[k - 1][l]) {
            return Err(Error::Network(format!(
                "profiles {} and {k} cross guide {l} out of order (v = {} then {})",
                k - 1,
                v[k - 1][l],
                v[k][l]
            )));
        }
    }
    Ok(())
}
