use std::path::PathBuf;

use curvenet::gordon::compute_intersections;
use curvenet::io::{tessellate, NetworkDocument, SurfaceDocument};
use curvenet::{build_gordon_surface, GordonConfig};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn wing_intersections_match_dense_sampling() {
    let doc = NetworkDocument::parse(&fixture("wing.json")).unwrap();
    let net = doc.network().unwrap().normalized().unwrap();
    let tol = net.diagonal() * 1e-7;
    let grid = compute_intersections(&net, tol).unwrap();
    const SAMPLES: usize = 10_000;
    for (k, f) in net.profiles().iter().enumerate() {
        let dense: Vec<_> = (0..=SAMPLES).map(|i| f.evaluate(i as f64 / SAMPLES as f64).unwrap()).collect();
        for (l, g) in net.guides().iter().enumerate() {
            let (u, v) = (grid.u_tilde[k][l], grid.v_tilde[k][l]);
            let (p, q) = (f.evaluate(u).unwrap(), g.evaluate(v).unwrap());
            assert!(p.distance(&q) <= tol, "pair ({k}, {l}) gap {}", p.distance(&q));
            let (i_best, d_best) = dense
                .iter()
                .map(|s| s.distance(&q))
                .enumerate()
                .fold((0, f64::INFINITY), |b, (i, d)| if d < b.1 { (i, d) } else { b });
            let u_best = i_best as f64 / SAMPLES as f64;
            assert!((u_best - u).abs() <= 2.0 / SAMPLES as f64, "pair ({k}, {l}): {u_best} vs {u}");
            assert!(d_best <= net.diagonal() * 1e-3);
        }
    }
}

#[test]
fn wing_document_round_trips() {
    let doc = NetworkDocument::parse(&fixture("wing.json")).unwrap();
    let text = doc.to_json();
    let again = NetworkDocument::parse(&text).unwrap();
    assert_eq!(again, doc);
    assert_eq!(again.to_json(), text);
}

#[test]
fn wing_tessellation_matches_evaluation() {
    let doc = NetworkDocument::parse(&fixture("wing.json")).unwrap();
    let g = build_gordon_surface(&doc.network().unwrap(), &GordonConfig::default()).unwrap();
    let mesh = tessellate(&g.surface, 65, 33).unwrap();
    assert_eq!(mesh.vertices.len(), 65 * 33);
    assert_eq!(mesh.triangles.len(), 2 * 64 * 32);
    for (i, v) in mesh.vertices.iter().enumerate() {
        let (a, b) = (i / 33, i % 33);
        let p = g.surface.evaluate(a as f64 / 64.0, b as f64 / 32.0).unwrap();
        assert!(p.distance(v) <= 1e-12);
    }
}

#[test]
fn gordon_surface_serializes_exactly() {
    let doc = NetworkDocument::parse(&fixture("fuselage.json")).unwrap();
    let g = build_gordon_surface(&doc.network().unwrap(), &doc.config()).unwrap();
    let text = SurfaceDocument::from_surface(&g.surface).to_json();
    let back = SurfaceDocument::parse(&text).unwrap().to_surface().unwrap();
    assert_eq!(back, g.surface);
}

#[test]
fn fuselage_seam_closes() {
    let doc = NetworkDocument::parse(&fixture("fuselage.json")).unwrap();
    let g = build_gordon_surface(&doc.network().unwrap(), &doc.config()).unwrap();
    for j in 0..=20 {
        let v = j as f64 / 20.0;
        let a = g.surface.evaluate(0.0, v).unwrap();
        let b = g.surface.evaluate(1.0, v).unwrap();
        assert!(a.distance(&b) < 1e-9, "seam gap {} at v = {v}", a.distance(&b));
    }
}

#[test]
fn rigid_motion_moves_the_surface_along() {
    let doc = NetworkDocument::parse(&fixture("wing.json")).unwrap();
    let net = doc.network().unwrap();
    let (s, c) = 0.3f64.sin_cos();
    let motion = |p: &curvenet::Vec3| curvenet::Vec3::new(c * p.x() - s * p.y() + 1.0, s * p.x() + c * p.y() - 2.0, p.z() + 0.5);
    let moved = curvenet::CurveNetwork::new(
        net.profiles().iter().map(|f| f.map_points(motion)).collect(),
        net.guides().iter().map(|g| g.map_points(motion)).collect(),
    )
    .unwrap();
    let a = build_gordon_surface(&net, &GordonConfig::default()).unwrap();
    let b = build_gordon_surface(&moved, &GordonConfig::default()).unwrap();
    for i in 0..=10 {
        for j in 0..=10 {
            let (u, v) = (i as f64 / 10.0, j as f64 / 10.0);
            let p = motion(&a.surface.evaluate(u, v).unwrap());
            assert!(p.distance(&b.surface.evaluate(u, v).unwrap()) < 1e-9);
        }
    }
}
