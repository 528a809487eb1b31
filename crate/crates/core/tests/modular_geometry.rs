use cuspidal::group::{excursion_trace, FordFamily};
use cuspidal::hyperbolic::{BoundaryPoint, ExtReal, Geodesic};
use cuspidal::modular::{ModularTrajectory, UniformReal, LOOKAHEAD};
use num_complex::Complex64 as C64;

#[test]
fn coded_excursions_match_geometric_trace() {
    for seed in 0..40u64 {
        let u = UniformReal::new(seed);
        let cf = u.cf(12 + LOOKAHEAD);
        let r = cf.value();
        let traj = ModularTrajectory::new(&cf.coeffs, 12).unwrap();
        let coded = traj.excursions(1.0);
        let horizon = 18.0;
        let g = Geodesic::from(C64::new(0.0, 1.0), BoundaryPoint::Real(ExtReal::Finite(r))).unwrap();
        let geo = excursion_trace(&g, &FordFamily::new(1.0).unwrap(), horizon).unwrap();
        let coded: Vec<_> = coded.iter().filter(|c| c.record.entry < horizon - 1.0).collect();
        let geo: Vec<_> = geo.iter().filter(|c| c.entry < horizon - 1.0).collect();
        assert_eq!(coded.len(), geo.len(), "seed {seed}: {coded:?}\n{geo:?}");
        for (c, e) in coded.iter().zip(&geo) {
            assert!((c.record.entry - e.entry).abs() < 1e-6, "seed {seed}");
            assert!((c.record.exit - e.exit).abs() < 1e-6, "seed {seed}");
            assert!((c.record.excursion - e.excursion).abs() < 1e-6 * (1.0 + e.excursion), "seed {seed}");
        }
    }
}
