use cuspidal::flow::{psi_average, psi_average_sampled, psi_value};
use cuspidal::group::{GroupPresentation, MetricBall, MODULAR_BASEPOINT};
use cuspidal::lyapunov::{lyap_estimate, sample_visual, visual_derivative};
use cuspidal::modular::{ModularTrajectory, UniformReal, LOOKAHEAD};
use cuspidal::walk::{drift_rel, drift_word, sample_path, ModularOracle, StepDistribution};
use cuspidal::Mobius;
use proptest::prelude::*;

#[test]
fn walks_are_reproducible() {
    let mu = StepDistribution::modular_uniform();
    let a = sample_path(&mu, 200, 99);
    let b = sample_path(&mu, 200, 99);
    let c = sample_path(&mu, 200, 100);
    assert_eq!(a.steps, b.steps);
    assert_eq!(a.locations, b.locations);
    assert_ne!(a.steps, c.steps);
}

#[test]
fn relative_drift_is_below_word_drift() {
    let mu = StepDistribution::modular_uniform();
    let paths: Vec<_> = (0..200).map(|i| sample_path(&mu, 60, cuspidal::seed::derive(3, i))).collect();
    let w = drift_word(&paths, &ModularOracle, 60).unwrap();
    let r = drift_rel(&paths, &ModularOracle, 60).unwrap();
    assert!(r.estimate.mean <= w.estimate.mean);
    assert!(r.estimate.mean > 0.0);
    assert_eq!(w.saturated, 0.0);
}

#[test]
fn psi_exact_matches_riemann_sum() {
    for seed in 0..20 {
        let cf = UniformReal::new(seed).cf(80 + LOOKAHEAD);
        let traj = ModularTrajectory::new(&cf.coeffs, 80).unwrap();
        let t = 100.0;
        let exact = psi_average(&traj.levels, t);
        let sampled = psi_average_sampled(&traj.levels, t, 1e-3);
        assert!((exact - sampled).abs() <= 0.01 * exact.max(1.0), "seed {seed}: {exact} vs {sampled}");
    }
}

#[test]
fn psi_steps_at_powers_of_two() {
    let ln2 = std::f64::consts::LN_2;
    assert_eq!(psi_value(0.5 * ln2), 0.0);
    assert_eq!(psi_value(ln2), 2.0);
    assert_eq!(psi_value(2.0 * ln2 - 1e-6), 2.0);
    assert_eq!(psi_value(3.0 * ln2), 14.0);
}

#[test]
fn lyapunov_estimates_are_running_maxima() {
    let pres = GroupPresentation::modular();
    let ball = MetricBall::enumerate(&pres, 10, 1 << 20).unwrap();
    let x0 = MODULAR_BASEPOINT;
    let radii: Vec<u32> = (1..=10).collect();
    for seed in 0..10 {
        let e = lyap_estimate(sample_visual(seed, x0), &radii, &ball, x0).unwrap();
        for w in e.values.windows(2).zip(radii.windows(2)) {
            let ((a, b), (r, s)) = ((w.0[0], w.0[1]), (w.1[0], w.1[1]));
            assert!(b * s as f64 >= a * r as f64 - 1e-12);
        }
        assert!(e.values.iter().all(|v| *v >= 0.0));
        assert!(ball.lengths()[e.witnesses[9]] <= 10);
    }
    assert!(lyap_estimate(sample_visual(0, x0), &[11], &ball, x0).is_err());
}

proptest! {
    #[test]
    fn identity_has_unit_visual_derivative(seed in any::<u64>()) {
        let id = Mobius::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let p = sample_visual(seed, MODULAR_BASEPOINT);
        prop_assert!((visual_derivative(&id, p, MODULAR_BASEPOINT) - 1.0).abs() < 1e-12);
    }
}
