use cuspidal::flat_cylinder::{entry_exit_times, length_at, length_minimum, twist_at, twist_difference, twist_limit, CylinderParams};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = CylinderParams> {
    (0.3..3.0f64, -4.0..0.0f64, 0.1..5.0f64, -3.0..-1.0f64)
        .prop_map(|(l0, lt, area, le)| CylinderParams::with_tan(l0, 10f64.powf(lt), area, 10f64.powf(le)).unwrap())
}

proptest! {
    #[test]
    fn boundary_times_solve_the_length_equation(p in params()) {
        match entry_exit_times(&p) {
            Some((t1, t2)) => {
                prop_assert!(p.crosses() && t1 <= t2);
                prop_assert!((length_at(&p, t1) / p.eps - 1.0).abs() < 1e-9);
                prop_assert!((length_at(&p, t2) / p.eps - 1.0).abs() < 1e-9);
                prop_assert!(length_at(&p, 0.5 * (t1 + t2)) <= p.eps * (1.0 + 1e-12));
                // closed form against the twist difference at the two times
                let direct = twist_at(&p, t2) - twist_at(&p, t1);
                let closed = twist_difference(&p).unwrap();
                prop_assert!((direct - closed).abs() <= 1e-7 * (1.0 + closed));
            }
            None => {
                prop_assert!(!p.crosses());
                prop_assert!(length_minimum(&p).1 > p.eps);
            }
        }
    }

    #[test]
    fn minimum_is_a_minimum(p in params(), dt in -2.0..2.0f64) {
        let (t, v) = length_minimum(&p);
        prop_assert!((length_at(&p, t) - v).abs() <= 1e-9 * v);
        prop_assert!(length_at(&p, t + dt) >= v * (1.0 - 1e-12));
    }

    #[test]
    fn twist_increases_to_its_limit(p in params(), t in -5.0..5.0f64) {
        prop_assert!(twist_at(&p, t) <= twist_at(&p, t + 0.1));
        prop_assert!(twist_at(&p, t) <= twist_limit(&p) * (1.0 + 1e-12));
    }
}
