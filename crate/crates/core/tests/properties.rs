use curvenet::profiles::{
    cst_evaluate, guide_point_to_3d, order_guide_parts, ContinuityCondition, CstParameters, GuidePointLocal, PartLink,
};
use curvenet::{basis_functions, Curve3, Knots, Vec3};
use proptest::prelude::*;

fn knots_strategy() -> impl Strategy<Value = (usize, Knots)> {
    (0usize..=5, prop::collection::vec(0.0f64..1.0, 0..8)).prop_map(|(degree, mut interior)| {
        interior.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (degree, Knots::clamped(degree, 0.0, 1.0, &interior).unwrap())
    })
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (-10.0f64..10.0, -10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

proptest! {
    #[test]
    fn basis_partition_of_unity((degree, knots) in knots_strategy(), u in 0.0f64..=1.0) {
        let sum: f64 = basis_functions(u, degree, &knots).unwrap().iter().map(|(_, b)| b).sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn knot_insertion_keeps_shape(
        pts in prop::collection::vec(vec3(), 4..10),
        u in 0.05f64..0.95,
        times in 1usize..=3,
    ) {
        let knots = Knots::uniform(pts.len(), 3).unwrap();
        let c = Curve3::new(3, knots, pts).unwrap();
        if c.knots().multiplicity(u) + times <= 3 {
            let r = c.insert_knot(u, times).unwrap();
            for i in 0..=20 {
                let t = i as f64 / 20.0;
                prop_assert!(r.evaluate(t).unwrap().distance(&c.evaluate(t).unwrap()) <= 1e-11);
            }
        }
    }

    #[test]
    fn cst_end_values(
        n1 in 0.1f64..2.0,
        n2 in 0.1f64..2.0,
        coefficients in prop::collection::vec(-1.0f64..1.0, 1..8),
        zeta_te in -0.1f64..0.1,
    ) {
        let p = CstParameters::new(n1, n2, coefficients, zeta_te).unwrap();
        prop_assert_eq!(cst_evaluate(&p, 0.0).unwrap(), 0.0);
        prop_assert_eq!(cst_evaluate(&p, 1.0).unwrap(), zeta_te);
    }

    #[test]
    fn cst_constant_shape(c in -2.0f64..2.0, degree in 0usize..10, psi in 0.0f64..=1.0) {
        let p = CstParameters::new(0.5, 1.0, vec![c; degree + 1], 0.0).unwrap();
        let class = psi.sqrt() * (1.0 - psi);
        prop_assert!((cst_evaluate(&p, psi).unwrap() - c * class).abs() <= 1e-12);
    }

    #[test]
    fn guide_point_on_axis_without_offsets(start in vec3(), end in vec3(), alpha in 0.0f64..=1.0) {
        prop_assume!(start.distance(&end) > 1e-3);
        let axis = end - start;
        let dir = if axis.x().abs() < 0.5 * axis.norm() { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
        let local = GuidePointLocal { alpha, beta: 0.0, gamma: 0.0 };
        let p = guide_point_to_3d(start, end, local, 1.0, 2.0, dir).unwrap();
        let off = (p - start).cross(&axis).norm() / axis.norm();
        prop_assert!(off <= 1e-12 * (1.0 + start.norm() + end.norm()));
    }

    #[test]
    fn guide_point_follows_rigid_motion(
        start in vec3(),
        end in vec3(),
        local in (0.0f64..=1.0, -1.0f64..1.0, -1.0f64..1.0),
        angle in 0.0f64..6.28,
        shift in vec3(),
    ) {
        prop_assume!(start.distance(&end) > 1e-2);
        let dir = Vec3::new(0.3, -0.2, 0.9);
        let axis = (end - start).normalized(0.0).unwrap();
        prop_assume!(dir.normalized(0.0).unwrap().cross(&axis).norm() > 1e-2);
        let local = GuidePointLocal { alpha: local.0, beta: local.1, gamma: local.2 };
        let (s, c) = angle.sin_cos();
        let rot = |p: Vec3| Vec3::new(c * p.x() - s * p.z(), p.y(), s * p.x() + c * p.z());
        let a = guide_point_to_3d(start, end, local, 1.5, 0.5, dir).unwrap();
        let b = guide_point_to_3d(rot(start) + shift, rot(end) + shift, local, 1.5, 0.5, rot(dir)).unwrap();
        prop_assert!((rot(a) + shift).distance(&b) <= 1e-9);
    }

    #[test]
    fn kahn_order_respects_dependencies(kinds in prop::collection::vec(0usize..5, 1..12)) {
        use ContinuityCondition::*;
        let all = [C0, C1FromPrevious, C1ToPrevious, C2FromPrevious, C2ToPrevious];
        let links: Vec<PartLink> = kinds
            .iter()
            .enumerate()
            .map(|(i, &k)| if i == 0 { PartLink::first() } else { PartLink::after(i - 1, all[k]) })
            .collect();
        let order = order_guide_parts(&links).unwrap();
        let pos = |i: usize| order.iter().position(|&x| x == i).unwrap();
        prop_assert_eq!(order.len(), links.len());
        for (i, l) in links.iter().enumerate() {
            if let Some(p) = l.previous {
                match l.condition {
                    C1FromPrevious | C2FromPrevious => prop_assert!(pos(p) < pos(i)),
                    C1ToPrevious | C2ToPrevious => prop_assert!(pos(i) < pos(p)),
                    C0 => {}
                }
            }
        }
    }
}
