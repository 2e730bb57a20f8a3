//! JSON documents describing curve networks and B-spline surfaces.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bspline::{chord_length_params, interpolate_points, BSplineCurve, BSplineSurface, EndTangents, KnotVector};
use crate::error::{Error, Result};
use crate::gordon::{CurveNetwork, GordonConfig};
use crate::point::Point3;
use crate::profiles::{
    assemble_guide, cst_to_curve, guide_point_to_3d, join_curves, point_list_profile, ContinuityCondition,
    CstParameters, GuidePointLocal, PartLink,
};

/// A network of named profiles and guides plus optional build settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigOverrides>,
    pub profiles: Vec<CurveSpec>,
    /// May be empty for documents that only feed skinning.
    #[serde(default)]
    pub guides: Vec<CurveSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples_check: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_ctrl: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guide_ctrl: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_refinements: Option<usize>,
}

impl ConfigOverrides {
    pub fn apply(&self, config: &mut GordonConfig<f64>) {
        if self.intersection_tol.is_some() {
            config.intersection_tol = self.intersection_tol;
        }
        if self.approx_tol.is_some() {
            config.approx_tol = self.approx_tol;
        }
        if let Some(n) = self.n_samples_check {
            config.n_samples_check = n;
        }
        if self.profile_ctrl.is_some() {
            config.profile_ctrl = self.profile_ctrl;
        }
        if self.guide_ctrl.is_some() {
            config.guide_ctrl = self.guide_ctrl;
        }
        if let Some(n) = self.max_refinements {
            config.max_refinements = n;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub name: String,
    #[serde(flatten)]
    pub shape: CurveShape,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveShape {
    /// Explicit B-spline.
    Bspline {
        degree: usize,
        knots: Vec<f64>,
        control_points: Vec<[f64; 3]>,
        #[serde(default, skip_serializing_if = "is_false")]
        periodic: bool,
    },
    /// Interpolated point list: a clamped cubic for profiles, degree
    /// `min(3, count - 1)` for guides.
    Points { points: Vec<[f64; 3]> },
    /// CST airfoil in the xz-plane, optionally scaled, twisted about the
    /// leading edge and moved.
    Cst {
        upper: CstSpec,
        lower: CstSpec,
        n_samples: usize,
        n_ctrl: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        transform: Option<Placement>,
    },
    /// Guide through local (α, β, γ) points between two profiles.
    GuidePoints {
        start: Attachment,
        end: Attachment,
        c_start: f64,
        c_end: f64,
        beta_dir: [f64; 3],
        points: Vec<[f64; 3]>,
    },
    /// Guide interpolating points given directly or on named profiles,
    /// with degree `min(degree, count - 1)` (default 3).
    Through {
        points: Vec<Attachment>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
    },
    /// Guide assembled from parts under continuity conditions.
    Parts { parts: Vec<PartSpec> },
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CstSpec {
    pub n1: f64,
    pub n2: f64,
    pub coefficients: Vec<f64>,
    pub zeta_te: f64,
}

impl CstSpec {
    pub fn parameters(&self) -> Result<CstParameters<f64>> {
        CstParameters::new(self.n1, self.n2, self.coefficients.clone(), self.zeta_te)
    }
}

/// Scale, then rotation by `twist_deg` about the y axis, then translation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub twist_deg: f64,
    #[serde(default)]
    pub translate: [f64; 3],
}

fn one() -> f64 {
    1.0
}

impl Placement {
    pub fn apply(&self, p: &Point3<f64>) -> Point3<f64> {
        let (s, c) = self.twist_deg.to_radians().sin_cos();
        let q = *p * self.scale;
        Point3::new(
            c * q.x() + s * q.z() + self.translate[0],
            q.y() + self.translate[1],
            -s * q.x() + c * q.z() + self.translate[2],
        )
    }
}

/// A point given directly or as a parameter on a named profile. Profile
/// parameters refer to the profile's domain mapped onto `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Attachment {
    OnProfile { profile: String, parameter: f64 },
    Point { point: [f64; 3] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartSpec {
    pub points: Vec<[f64; 3]>,
    /// Index of the part this one continues.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub previous: Option<usize>,
    #[serde(default = "c0", skip_serializing_if = "is_c0")]
    pub condition: ConditionSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionSpec {
    C0,
    #[serde(rename = "C1_from_previous")]
    C1FromPrevious,
    #[serde(rename = "C1_to_previous")]
    C1ToPrevious,
    #[serde(rename = "C2_from_previous")]
    C2FromPrevious,
    #[serde(rename = "C2_to_previous")]
    C2ToPrevious,
}

fn c0() -> ConditionSpec {
    ConditionSpec::C0
}

fn is_c0(c: &ConditionSpec) -> bool {
    *c == ConditionSpec::C0
}

impl From<ConditionSpec> for ContinuityCondition {
    fn from(c: ConditionSpec) -> Self {
        match c {
            ConditionSpec::C0 => ContinuityCondition::C0,
            ConditionSpec::C1FromPrevious => ContinuityCondition::C1FromPrevious,
            ConditionSpec::C1ToPrevious => ContinuityCondition::C1ToPrevious,
            ConditionSpec::C2FromPrevious => ContinuityCondition::C2FromPrevious,
            ConditionSpec::C2ToPrevious => ContinuityCondition::C2ToPrevious,
        }
    }
}

/// Deserializes JSON text; errors carry the JSON path of the offending value.
pub fn parse_json<'de, D: Deserialize<'de>>(text: &'de str) -> Result<D> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse { path, message: e.into_inner().to_string() }
    })
}

fn p3(c: &[f64; 3]) -> Point3<f64> {
    Point3::from(*c)
}

fn validation(path: String) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::InvalidArgument(message) => Error::Validation { path: path.clone(), message },
        Error::Domain { .. } => Error::Validation { path: path.clone(), message: e.to_string() },
        other => other,
    }
}

impl NetworkDocument {
    /// Parses and validates a network document.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: NetworkDocument = parse_json(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        for (family, list) in [("profiles", &self.profiles), ("guides", &self.guides)] {
            for (i, c) in list.iter().enumerate() {
                if !names.insert(c.name.as_str()) {
                    return Err(Error::Validation {
                        path: format!("{family}[{i}].name"),
                        message: format!("curve name {:?} is used more than once", c.name),
                    });
                }
            }
        }
        self.guide_curves().map(|_| ())
    }

    /// Build settings: defaults with the document's overrides applied.
    pub fn config(&self) -> GordonConfig<f64> {
        let mut c = GordonConfig::default();
        if let Some(o) = &self.config {
            o.apply(&mut c);
        }
        c
    }

    pub fn profile_curves(&self) -> Result<Vec<BSplineCurve<f64, 3>>> {
        self.profiles
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let path = format!("profiles[{i}] ({})", spec.name);
                realize(spec, true, &[], &path).map_err(validation(path))
            })
            .collect()
    }

    pub fn guide_curves(&self) -> Result<Vec<BSplineCurve<f64, 3>>> {
        let profiles = self.profile_curves()?;
        let named: Vec<(&str, &BSplineCurve<f64, 3>)> =
            self.profiles.iter().map(|s| s.name.as_str()).zip(&profiles).collect();
        self.guides
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let path = format!("guides[{i}] ({})", spec.name);
                realize(spec, false, &named, &path).map_err(validation(path))
            })
            .collect()
    }

    pub fn network(&self) -> Result<CurveNetwork<f64>> {
        CurveNetwork::new(self.profile_curves()?, self.guide_curves()?)
    }

    /// Error text with curve indices replaced by the document's names.
    pub fn describe(&self, e: &Error) -> String {
        let pname = |k: usize| self.profiles.get(k).map_or("?", |c| c.name.as_str());
        let gname = |l: usize| self.guides.get(l).map_or("?", |c| c.name.as_str());
        match e {
            Error::NoIntersection { profile, guide, distance } => format!(
                "profile {:?} does not intersect guide {:?} (closest distance {distance:e}); \
                 move the curves so they cross or raise intersection_tol",
                pname(*profile),
                gname(*guide)
            ),
            Error::AmbiguousIntersection { profile, guide, count } => format!(
                "profile {:?} intersects guide {:?} {count} times; each pair must cross exactly once",
                pname(*profile),
                gname(*guide)
            ),
            Error::Reparametrization(msg) => {
                let named = msg
                    .split_once(": ")
                    .and_then(|(head, rest)| {
                        let (family, index) = head.split_once(' ')?;
                        let index: usize = index.parse().ok()?;
                        let list = match family {
                            "profile" => &self.profiles,
                            "guide" => &self.guides,
                            _ => return None,
                        };
                        Some(format!("{family} {:?}: {rest}", list.get(index)?.name))
                    })
                    .unwrap_or_else(|| msg.clone());
                format!("reparametrization error: {named}")
            }
            other => other.to_string(),
        }
    }
}

fn realize(
    spec: &CurveSpec,
    is_profile: bool,
    profiles: &[(&str, &BSplineCurve<f64, 3>)],
    path: &str,
) -> Result<BSplineCurve<f64, 3>> {
    match &spec.shape {
        CurveShape::Bspline { degree, knots, control_points, periodic } => {
            let expected = control_points.len() + degree + 1;
            if knots.len() != expected {
                return Err(Error::Validation {
                    path: format!("{path}.knots"),
                    message: format!(
                        "{} knots given, but degree {degree} with {} control points needs {expected}",
                        knots.len(),
                        control_points.len()
                    ),
                });
            }
            let kv = KnotVector::new(knots.clone())?;
            let cps = control_points.iter().map(p3).collect();
            if *periodic {
                BSplineCurve::new_periodic(*degree, kv, cps)
            } else {
                BSplineCurve::new(*degree, kv, cps)
            }
        }
        CurveShape::Points { points } => {
            let pts: Vec<Point3<f64>> = points.iter().map(p3).collect();
            if is_profile {
                point_list_profile(&pts)
            } else {
                interpolate_guide(&pts)
            }
        }
        CurveShape::Cst { upper, lower, n_samples, n_ctrl, transform } => {
            let c = cst_to_curve(&upper.parameters()?, &lower.parameters()?, *n_samples, *n_ctrl)?;
            Ok(match transform {
                Some(t) => c.map_points(|p| t.apply(p)),
                None => c,
            })
        }
        CurveShape::GuidePoints { start, end, c_start, c_end, beta_dir, points } => {
            let s = attach(start, profiles, &format!("{path}.start"))?;
            let e = attach(end, profiles, &format!("{path}.end"))?;
            let mut pts = vec![s];
            let mut last_alpha = 0.0;
            for (j, q) in points.iter().enumerate() {
                if !(q[0] > last_alpha && q[0] < 1.0) {
                    return Err(Error::Validation {
                        path: format!("{path}.points[{j}]"),
                        message: format!("alpha values must increase strictly inside (0, 1), got {}", q[0]),
                    });
                }
                last_alpha = q[0];
                let local = GuidePointLocal { alpha: q[0], beta: q[1], gamma: q[2] };
                pts.push(guide_point_to_3d(s, e, local, *c_start, *c_end, p3(beta_dir))?);
            }
            pts.push(e);
            interpolate_guide(&pts)
        }
        CurveShape::Through { points, degree } => {
            let pts: Vec<Point3<f64>> = points
                .iter()
                .enumerate()
                .map(|(j, a)| attach(a, profiles, &format!("{path}.points[{j}]")))
                .collect::<Result<_>>()?;
            if pts.len() < 2 {
                return Err(Error::invalid("a guide needs at least two points"));
            }
            let d = degree.unwrap_or(3);
            if d == 0 {
                return Err(Error::invalid("guide degree must be at least 1"));
            }
            let params = chord_length_params(&pts)?;
            interpolate_points(&pts, &params, d.min(pts.len() - 1), false, EndTangents::none())
        }
        CurveShape::Parts { parts } => {
            let pts: Vec<Vec<Point3<f64>>> = parts.iter().map(|p| p.points.iter().map(p3).collect()).collect();
            let links: Vec<PartLink> = parts
                .iter()
                .map(|p| PartLink { previous: p.previous, condition: p.condition.into() })
                .collect();
            let curves = assemble_guide(&pts, &links)?;
            join_curves(&chain_order(&links)?.into_iter().map(|i| curves[i].clone()).collect::<Vec<_>>())
        }
    }
}

/// Order of the parts along the guide: follow `previous` links from the
/// part that has none.
fn chain_order(links: &[PartLink]) -> Result<Vec<usize>> {
    let heads: Vec<usize> = (0..links.len()).filter(|&i| links[i].previous.is_none()).collect();
    let [head] = heads[..] else {
        return Err(Error::invalid("guide parts must form a single chain with exactly one first part"));
    };
    let mut order = vec![head];
    while let Some(next) = (0..links.len()).find(|&j| links[j].previous == Some(*order.last().expect("non-empty"))) {
        if order.contains(&next) {
            break;
        }
        order.push(next);
    }
    if order.len() != links.len() {
        return Err(Error::invalid("guide parts must form a single chain"));
    }
    Ok(order)
}

fn interpolate_guide(pts: &[Point3<f64>]) -> Result<BSplineCurve<f64, 3>> {
    if pts.len() < 2 {
        return Err(Error::invalid("a guide needs at least two points"));
    }
    let params = chord_length_params(pts)?;
    interpolate_points(pts, &params, 3.min(pts.len() - 1), false, EndTangents::none())
}

fn attach(a: &Attachment, profiles: &[(&str, &BSplineCurve<f64, 3>)], path: &str) -> Result<Point3<f64>> {
    match a {
        Attachment::Point { point } => Ok(p3(point)),
        Attachment::OnProfile { profile, parameter } => {
            let Some((_, c)) = profiles.iter().find(|(n, _)| n == profile) else {
                return Err(Error::Validation {
                    path: format!("{path}.profile"),
                    message: format!("no profile named {profile:?}"),
                });
            };
            if !(0.0..=1.0).contains(parameter) {
                return Err(Error::Validation {
                    path: format!("{path}.parameter"),
                    message: format!("parameter {parameter} outside [0, 1]"),
                });
            }
            let (a, b) = c.domain();
            c.evaluate(a + (b - a) * parameter)
        }
    }
}

/// Plain serialized form of a B-spline surface. `control_points[i][j]`
/// is the control point with index `i` along `u` and `j` along `v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub degree_u: usize,
    pub degree_v: usize,
    pub knots_u: Vec<f64>,
    pub knots_v: Vec<f64>,
    pub control_points: Vec<Vec<[f64; 3]>>,
}

impl SurfaceDocument {
    pub fn from_surface(s: &BSplineSurface<f64>) -> Self {
        SurfaceDocument {
            degree_u: s.degree_u(),
            degree_v: s.degree_v(),
            knots_u: s.knots_u().as_slice().to_vec(),
            knots_v: s.knots_v().as_slice().to_vec(),
            control_points: s.control_grid().iter().map(|r| r.iter().map(|p| p.0).collect()).collect(),
        }
    }

    pub fn to_surface(&self) -> Result<BSplineSurface<f64>> {
        BSplineSurface::new(
            self.degree_u,
            self.degree_v,
            KnotVector::new(self.knots_u.clone())?,
            KnotVector::new(self.knots_v.clone())?,
            self.control_points.iter().map(|r| r.iter().map(p3).collect()).collect(),
        )
        .map_err(validation("surface".into()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let d: SurfaceDocument = parse_json(text)?;
        d.to_surface()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface serializes")
    }
}
