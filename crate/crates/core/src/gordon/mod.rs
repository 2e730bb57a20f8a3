//! Gordon surfaces: interpolation of a curve network by the sum of two
//! skinned surfaces minus the tensor-product interpolant of the
//! intersection points.
//!
//! Arbitrary networks are first made compatible. Every profile is refitted
//! so that it meets guide `l` at the common parameter `u_avg[l]`, and every
//! guide so that it meets profile `k` at `v_avg[k]`.

mod intersect;
mod network;
mod reparam;

pub use network::{compute_intersections, CurveNetwork, IntersectionGrid};
pub use reparam::{reparametrize_to_targets, ReparamFunction, Reparametrized, BIJECTIVITY_SAMPLES};

use crate::bspline::{make_curves_compatible, BSplineCurve, BSplineSurface, ParamList};
use crate::error::{Error, Result};
use crate::point::Point3;
use crate::scalar::Real;
use crate::skinning::{default_skin_degree, skin_curves, tensor_interpolate};
use reparam::{reparametrize_with, FitOptions};

/// Tuning knobs for [`build_gordon_surface`]. Tolerances left as `None`
/// scale with the network's bounding-box diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct GordonConfig<T> {
    /// Largest profile–guide gap still treated as an intersection
    /// (default `1e-7 · diag`).
    pub intersection_tol: Option<T>,
    /// Target deviation of each refitted curve from the original
    /// (default `1e-4 · diag`).
    pub approx_tol: Option<T>,
    /// Extra samples per curve on which the refit error is measured.
    pub n_samples_check: usize,
    /// Control points per refitted profile; chosen automatically if `None`.
    pub profile_ctrl: Option<usize>,
    /// Control points per refitted guide; chosen automatically if `None`.
    pub guide_ctrl: Option<usize>,
    /// How often the control-point count may be doubled to meet
    /// `approx_tol`.
    pub max_refinements: usize,
}

impl<T> Default for GordonConfig<T> {
    fn default() -> Self {
        GordonConfig {
            intersection_tol: None,
            approx_tol: None,
            n_samples_check: 256,
            profile_ctrl: None,
            guide_ctrl: None,
            max_refinements: 4,
        }
    }
}

/// The surface together with every intermediate the construction produced.
#[derive(Clone, Debug)]
pub struct GordonSurface<T: Real> {
    pub surface: BSplineSurface<T>,
    pub intersections: IntersectionGrid<T>,
    /// Refitted, mutually compatible profiles; profile `k` is the isocurve
    /// at `v = intersections.v_avg[k]`.
    pub profiles: Vec<BSplineCurve<T, 3>>,
    /// Refitted, mutually compatible guides; guide `l` is the isocurve at
    /// `u = intersections.u_avg[l]`.
    pub guides: Vec<BSplineCurve<T, 3>>,
    pub profile_sigmas: Vec<ReparamFunction<T>>,
    pub guide_sigmas: Vec<ReparamFunction<T>>,
    /// Largest deviation of a refitted profile from its original.
    pub profile_error: T,
    pub guide_error: T,
    pub profile_skin: BSplineSurface<T>,
    pub guide_skin: BSplineSurface<T>,
    pub tensor: BSplineSurface<T>,
    /// Network bounding-box diagonal.
    pub diagonal: T,
}

/// Builds the Gordon surface interpolating `network`.
pub fn build_gordon_surface<T: Real>(
    network: &CurveNetwork<T>,
    config: &GordonConfig<T>,
) -> Result<GordonSurface<T>> {
    let diagonal = network.diagonal();
    if !(diagonal > T::zero()) {
        return Err(Error::Network("network is degenerate: all control points coincide".into()));
    }
    let intersection_tol = config.intersection_tol.unwrap_or(diagonal * T::lit(1e-7));
    let approx_tol = config.approx_tol.unwrap_or(diagonal * T::lit(1e-4));
    let net = network.normalized()?;
    let grid = compute_intersections(&net, intersection_tol)?;
    let (n_prof, n_guide) = (grid.profile_count(), grid.guide_count());

    let family = |curves: &[BSplineCurve<T, 3>],
                  old: Vec<Vec<T>>,
                  targets: &ParamList<T>,
                  points: Vec<Vec<Point3<T>>>,
                  n_ctrl: Option<usize>,
                  name: &str| {
        let degree = curves.iter().map(BSplineCurve::degree).max().unwrap_or(3).max(3);
        let fixed = n_ctrl.is_some();
        let mut n = n_ctrl.unwrap_or_else(|| {
            let most = curves.iter().map(|c| c.control_points().len()).max().unwrap_or(0);
            most.max(degree + 2).max(targets.len() + degree)
        });
        let mut attempts = 0;
        loop {
            let opts = FitOptions { n_ctrl: n, degree, check_samples: config.n_samples_check };
            let fitted: Result<Vec<Reparametrized<T>>> = curves
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    reparametrize_with(c, &old[i], targets, &points[i], opts).map_err(|e| match e {
                        Error::Reparametrization(msg) => Error::Reparametrization(format!("{name} {i}: {msg}")),
                        Error::Numeric(msg) => Error::Numeric(format!("{name} {i}: {msg}")),
                        other => other,
                    })
                })
                .collect();
            let retry = attempts < config.max_refinements;
            match fitted {
                Err(Error::Numeric(_)) if retry => {}
                Err(e) => return Err(e),
                Ok(fits) => {
                    let err = fits.iter().map(|r| r.max_error).fold(T::zero(), T::max);
                    if fixed || err <= approx_tol || !retry {
                        return Ok((fits, err));
                    }
                }
            }
            attempts += 1;
            n = 2 * n - degree;
        }
    };

    let transpose = |m: &[Vec<T>]| -> Vec<Vec<T>> {
        (0..n_guide).map(|l| (0..n_prof).map(|k| m[k][l]).collect()).collect()
    };
    let profile_points = grid.points.clone();
    let guide_points: Vec<Vec<Point3<T>>> =
        (0..n_guide).map(|l| (0..n_prof).map(|k| grid.points[k][l]).collect()).collect();

    let (pfits, profile_error) = family(
        net.profiles(),
        grid.u_tilde.clone(),
        &grid.u_avg,
        profile_points,
        config.profile_ctrl,
        "profile",
    )?;
    let (gfits, guide_error) = family(
        net.guides(),
        transpose(&grid.v_tilde),
        &grid.v_avg,
        guide_points,
        config.guide_ctrl,
        "guide",
    )?;

    let profiles = make_curves_compatible(&pfits.iter().map(|r| r.curve.clone()).collect::<Vec<_>>())?;
    let guides = make_curves_compatible(&gfits.iter().map(|r| r.curve.clone()).collect::<Vec<_>>())?;

    let d_f = default_skin_degree(n_prof);
    let d_g = default_skin_degree(n_guide);
    let profile_skin = skin_curves(&profiles, &grid.v_avg, d_f)?;
    let guide_skin = skin_curves(&guides, &grid.u_avg, d_g)?.transposed();
    let alpha: Vec<Vec<Point3<T>>> =
        (0..n_guide).map(|l| (0..n_prof).map(|k| grid.points[k][l]).collect()).collect();
    let tensor = tensor_interpolate(
        &alpha,
        &grid.u_avg,
        &grid.v_avg,
        d_g,
        d_f,
        guide_skin.knots_u(),
        profile_skin.knots_v(),
    )?;
    let surface = combine_summands(&profile_skin, &guide_skin, &tensor)?;

    Ok(GordonSurface {
        surface,
        intersections: grid,
        profiles,
        guides,
        profile_sigmas: pfits.into_iter().map(|r| r.sigma).collect(),
        guide_sigmas: gfits.into_iter().map(|r| r.sigma).collect(),
        profile_error,
        guide_error,
        profile_skin,
        guide_skin,
        tensor,
        diagonal,
    })
}

/// Brings three surfaces on a common domain to common degrees and knots and
/// returns `a + b − c`.
pub fn combine_summands<T: Real>(
    a: &BSplineSurface<T>,
    b: &BSplineSurface<T>,
    c: &BSplineSurface<T>,
) -> Result<BSplineSurface<T>> {
    let parts = [a, b, c];
    let tol = T::lit(1e-12);
    for s in &parts[1..] {
        let close = |x: (T, T), y: (T, T)| (x.0 - y.0).abs() <= tol && (x.1 - y.1).abs() <= tol;
        if !close(s.domain_u(), a.domain_u()) || !close(s.domain_v(), a.domain_v()) {
            return Err(Error::invalid("summand surfaces are defined on different domains"));
        }
    }
    let du = parts.iter().map(|s| s.degree_u()).max().unwrap_or(0);
    let dv = parts.iter().map(|s| s.degree_v()).max().unwrap_or(0);
    let elevated: Vec<BSplineSurface<T>> = parts
        .iter()
        .map(|s| s.elevate_degree_u(du)?.elevate_degree_v(dv))
        .collect::<Result<_>>()?;
    let ku = elevated[1..].iter().fold(elevated[0].knots_u().clone(), |k, s| k.merged(s.knots_u()));
    let kv = elevated[1..].iter().fold(elevated[0].knots_v().clone(), |k, s| k.merged(s.knots_v()));
    let refined: Vec<BSplineSurface<T>> = elevated
        .iter()
        .map(|s| s.refine(&s.knots_u().missing_from(&ku), &s.knots_v().missing_from(&kv)))
        .collect::<Result<_>>()?;
    let (p, q, r) = (&refined[0], &refined[1], &refined[2]);
    assert!(
        p.knots_u() == q.knots_u()
            && p.knots_u() == r.knots_u()
            && p.knots_v() == q.knots_v()
            && p.knots_v() == r.knots_v(),
        "summands are incompatible after degree elevation and knot insertion"
    );
    let grid: Vec<Vec<Point3<T>>> = p
        .control_grid()
        .iter()
        .zip(q.control_grid())
        .zip(r.control_grid())
        .map(|((pr, qr), rr)| pr.iter().zip(qr).zip(rr).map(|((x, y), z)| *x + *y - *z).collect())
        .collect();
    BSplineSurface::new(du, dv, ku, kv, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::KnotVector;

    fn seg(a: [f64; 3], b: [f64; 3]) -> BSplineCurve<f64, 3> {
        let k = KnotVector::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        BSplineCurve::new(1, k, vec![Point3::from(a), Point3::from(b)]).unwrap()
    }

    fn bezier(pts: [[f64; 3]; 4]) -> BSplineCurve<f64, 3> {
        let k = KnotVector::new(vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        BSplineCurve::new(3, k, pts.iter().map(|p| Point3::from(*p)).collect()).unwrap()
    }

    #[test]
    fn unit_square() {
        let net = CurveNetwork::new(
            vec![seg([0., 0., 0.], [1., 0., 0.]), seg([0., 1., 0.], [1., 1., 0.])],
            vec![seg([0., 0., 0.], [0., 1., 0.]), seg([1., 0., 0.], [1., 1., 0.])],
        )
        .unwrap();
        let g = build_gordon_surface(&net, &GordonConfig::default()).unwrap();
        let p = g.surface.evaluate(0.5, 0.5).unwrap();
        assert!(p.distance(&Point3::new(0.5, 0.5, 0.0)) < 1e-12, "{p:?}");
        for (u, v) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.3, 0.8)] {
            let p = g.surface.evaluate(u, v).unwrap();
            assert!(p.distance(&Point3::new(u, v, 0.0)) < 1e-12);
        }
    }

    #[test]
    fn coons_patch_of_curved_boundary() {
        let f0 = bezier([[0., 0., 0.], [1., 0., 0.5], [2., 0., -0.5], [3., 0., 0.]]);
        let f1 = bezier([[0., 2., 0.], [1., 2., 1.0], [2., 2., 0.0], [3., 2., 0.]]);
        let g0 = bezier([[0., 0., 0.], [0., 0.7, 0.4], [0., 1.3, 0.4], [0., 2., 0.]]);
        let g1 = bezier([[3., 0., 0.], [3., 0.7, -0.3], [3., 1.3, 0.2], [3., 2., 0.]]);
        let net = CurveNetwork::new(vec![f0.clone(), f1.clone()], vec![g0.clone(), g1.clone()]).unwrap();
        let g = build_gordon_surface(&net, &GordonConfig::default()).unwrap();
        // bilinearly blended Coons patch as independent reference
        for i in 0..=8 {
            for j in 0..=8 {
                let (u, v) = (i as f64 / 8.0, j as f64 / 8.0);
                let coons = f0.point_at(u) * (1.0 - v) + f1.point_at(u) * v + g0.point_at(v) * (1.0 - u)
                    + g1.point_at(v) * u
                    - (f0.point_at(0.0) * ((1.0 - u) * (1.0 - v))
                        + f0.point_at(1.0) * (u * (1.0 - v))
                        + f1.point_at(0.0) * ((1.0 - u) * v)
                        + f1.point_at(1.0) * (u * v));
                let s = g.surface.evaluate(u, v).unwrap();
                assert!(s.distance(&coons) < 1e-9, "({u}, {v}): {}", s.distance(&coons));
            }
        }
    }

    #[test]
    fn combine_rejects_mismatched_domains() {
        let k = KnotVector::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let k2 = KnotVector::new(vec![0.0, 0.0, 2.0, 2.0]).unwrap();
        let grid = vec![vec![Point3::zero(); 2]; 2];
        let a = BSplineSurface::new(1, 1, k.clone(), k.clone(), grid.clone()).unwrap();
        let b = BSplineSurface::new(1, 1, k2, k, grid).unwrap();
        assert!(matches!(combine_summands(&a, &b, &a), Err(Error::InvalidArgument(_))));
    }
}
