use std::f64::consts::TAU;

use cuspidal::hyperbolic::{boundary_derivative, distance, entry_exit, excursion_boundary, max_log_derivative, EntryExit};
use cuspidal::{BoundaryPoint, Complex64 as C64, Geodesic, Horoball, Mobius};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, 0.05..4.0f64).prop_map(|(x, y)| C64::new(x, y))
}

/// Disc isometries with |a| ≤ 0.9, so entries stay well conditioned.
fn isometry() -> impl Strategy<Value = Mobius> {
    (0.0..TAU, 0.0..0.9f64, 0.0..TAU).prop_map(|(th, r, phi)| Mobius::from_disc(th, C64::from_polar(r, phi)).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn distance_is_invariant(z in point(), w in point(), m in isometry()) {
        prop_assert!(close(distance(z, w), distance(m.apply(z), m.apply(w)), 1e-8));
    }

    #[test]
    fn triangle_inequality(x in point(), y in point(), z in point()) {
        prop_assert!(distance(x, z) <= distance(x, y) + distance(y, z) + 1e-9);
    }

    #[test]
    fn inverse_undoes(z in point(), m in isometry(), n in isometry()) {
        let w = m.compose(&n).apply(z);
        prop_assert!((m.compose(&n).inverse().apply(w) - z).norm() < 1e-8 * (1.0 + z.norm()));
        prop_assert!((m.apply(n.apply(z)) - w).norm() < 1e-8 * (1.0 + w.norm()));
        prop_assert!((m.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn displacement_is_max_log_derivative(m in isometry()) {
        let i = C64::new(0.0, 1.0);
        prop_assert!(close(max_log_derivative(&m), distance(i, m.apply(i)), 1e-9));
        // no boundary point is stretched more than the maximum
        for k in 0..16 {
            let p = BoundaryPoint::Angle(TAU * k as f64 / 16.0);
            prop_assert!(boundary_derivative(&m, p).ln() <= max_log_derivative(&m) + 1e-9);
        }
    }

    #[test]
    fn entry_and_exit_lie_on_the_horosphere(th in 0.0..TAU, size in 0.05..0.95f64, dir in 0.0..TAU) {
        let h = Horoball::from_disc(th, size).unwrap();
        let g = Geodesic::from(C64::new(0.0, 1.0), BoundaryPoint::Angle(dir)).unwrap();
        if let EntryExit::Crossing { entry, exit } = entry_exit(&g, &h) {
            prop_assert!(entry < exit);
            prop_assert!(h.depth(g.point(entry)).abs() < 1e-7);
            prop_assert!(h.depth(g.point(exit)).abs() < 1e-7);
            prop_assert!(h.depth(g.point(0.5 * (entry + exit))) > 0.0);
        }
    }

    #[test]
    fn excursions_are_isometry_invariant(th in 0.0..TAU, size in 0.05..0.95f64, phi in -1.0..1.0f64, m in isometry()) {
        let h = Horoball::from_disc(th, size).unwrap();
        let i = C64::new(0.0, 1.0);
        // aim inside the visual aperture of h
        let g = Geodesic::from(i, BoundaryPoint::Angle(th + phi * h.depth(i).exp().asin())).unwrap();
        let (a, b) = (entry_exit(&g, &h), entry_exit(&g.image(&m), &h.image(&m)));
        if let (Some((e0, x0)), Some((e1, x1))) = (a.times(), b.times()) {
            prop_assert!(close(x0 - e0, x1 - e1, 1e-6));
            let (u, v) = (excursion_boundary(&g, &h).unwrap(), excursion_boundary(&g.image(&m), &h.image(&m)).unwrap());
            prop_assert!(close(u, v, 1e-6));
        }
    }
}
