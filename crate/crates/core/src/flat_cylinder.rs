//! A flat cylinder with core curve α under the Teichmüller flow.
//!
//! The flow stretches the horizontal direction by `e^t` and contracts the
//! vertical one by `e^{−t}`. If α makes angle θ₀ with the vertical foliation
//! and has length ℓ₀, its squared length is
//! `ℓ_t² = ℓ₀²(sin²θ₀ e^{2t} + cos²θ₀ e^{−2t})`. The cylinder of area A has
//! width `A/ℓ_t`, and its twist is `(A/ℓ_t²)·tanθ₀·e^{2t}` up to O(1).
//!
//! The curve is short (inside the horoball) while `ℓ_t² ≤ ε`. With
//! `X = e^{2t}` the boundary times solve
//! `X² − (ε/(ℓ₀² sin²θ₀))·X + cot²θ₀ = 0`.

use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderParams {
    pub l0: f64,
    pub theta0: f64,
    pub area: f64,
    /// Threshold on the squared length ℓ_t².
    pub eps: f64,
}

impl CylinderParams {
    pub fn new(l0: f64, theta0: f64, area: f64, eps: f64) -> Result<CylinderParams> {
        if !(l0 > 0.0 && area > 0.0 && eps > 0.0) {
            return Err(Error::Invalid("ℓ₀, A and ε must be positive"));
        }
        if !(theta0 > 0.0 && theta0 < core::f64::consts::FRAC_PI_2) {
            return Err(Error::Invalid("θ₀ must lie in (0, π/2)"));
        }
        Ok(CylinderParams { l0, theta0, area, eps })
    }

    /// Same parameters, given `tan θ₀` instead of θ₀.
    pub fn with_tan(l0: f64, tan_theta0: f64, area: f64, eps: f64) -> Result<CylinderParams> {
        CylinderParams::new(l0, tan_theta0.atan(), area, eps)
    }

    /// Whether the trajectory ever enters `{ℓ² ≤ ε}`: `sin 2θ₀ ≤ ε/ℓ₀²`.
    pub fn crosses(&self) -> bool {
        self.discriminant() >= 0.0
    }

    fn coefficients(&self) -> (f64, f64) {
        let s = self.theta0.sin();
        let c = self.theta0.cos();
        (self.eps / (self.l0 * self.l0 * s * s), (c / s) * (c / s))
    }

    fn discriminant(&self) -> f64 {
        let (b, c) = self.coefficients();
        b * b - 4.0 * c
    }
}

/// Squared length ℓ_t².
pub fn length_at(p: &CylinderParams, t: f64) -> f64 {
    let (s, c) = (p.theta0.sin(), p.theta0.cos());
    p.l0 * p.l0 * (s * s * (2.0 * t).exp() + c * c * (-2.0 * t).exp())
}

/// Time and value of the minimum of ℓ_t².
pub fn length_minimum(p: &CylinderParams) -> (f64, f64) {
    let (s, c) = (p.theta0.sin(), p.theta0.cos());
    (0.25 * ((c / s) * (c / s)).ln(), 2.0 * p.l0 * p.l0 * s * c)
}

pub fn twist_at(p: &CylinderParams, t: f64) -> f64 {
    p.area / length_at(p, t) * p.theta0.tan() * (2.0 * t).exp()
}

/// `lim_{t→∞} twist_at(p, t) = A/(ℓ₀² sinθ₀ cosθ₀)`.
pub fn twist_limit(p: &CylinderParams) -> f64 {
    p.area / (p.l0 * p.l0 * p.theta0.sin() * p.theta0.cos())
}

/// Entry and exit times of `{ℓ² ≤ ε}`, equal at tangency.
pub fn entry_exit_times(p: &CylinderParams) -> Option<(f64, f64)> {
    let disc = p.discriminant();
    if disc < 0.0 {
        return None;
    }
    let (b, c) = p.coefficients();
    let x2 = 0.5 * (b + disc.sqrt());
    let x1 = c / x2;
    Some((0.5 * x1.ln(), 0.5 * x2.ln()))
}

/// `(A/ε)·√(ε²/(ℓ₀⁴ sin²θ₀ cos²θ₀) − 4)`.
pub fn twist_difference(p: &CylinderParams) -> Result<f64> {
    if !p.crosses() {
        return Err(Error::NoCrossing);
    }
    let sc = p.theta0.sin() * p.theta0.cos();
    let l2 = p.l0 * p.l0;
    let inner = (p.eps / (l2 * sc)).powi(2) - 4.0;
    Ok(p.area / p.eps * inner.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub phi0: f64,
    pub phi_max: f64,
    pub twist_difference: f64,
    /// `twist_difference / ((A/ε)·(φ_max/φ₀))`.
    pub ratio: f64,
}

/// Twist change across the excursion against `(A/ε)` times the visual
/// excursion `φ_max/φ₀`, where `φ₀ = 2θ₀` and `sin φ_max = ε/ℓ₀²`.
///
/// Near-tangent trajectories with `sin φ₀ > ½ sin φ_max` are refused.
pub fn excursion_comparison(p: &CylinderParams) -> Result<Comparison> {
    let sin_max = p.eps / (p.l0 * p.l0);
    if sin_max >= 1.0 {
        return Err(Error::Hypothesis("ε/ℓ₀² must be below 1"));
    }
    let phi0 = 2.0 * p.theta0;
    let phi_max = sin_max.asin();
    if phi0.sin() > 0.5 * sin_max {
        return Err(Error::Hypothesis("near-tangent regime sin φ₀ > ½ sin φ_max"));
    }
    let td = twist_difference(p)?;
    Ok(Comparison { phi0, phi_max, twist_difference: td, ratio: td / (p.area / p.eps * (phi_max / phi0)) })
}

/// The documented sweep: ℓ₀ ∈ {0.5, 1, 2}, tanθ₀ on 13 log-spaced values
/// in [10⁻⁴, 10⁻¹], ε ∈ {10⁻³, 10⁻²}, A = 1.
pub fn default_sweep() -> Vec<CylinderParams> {
    let mut out = Vec::new();
    for &l0 in &[0.5, 1.0, 2.0] {
        for k in 0..13 {
            let tan = 10f64.powf(-4.0 + 3.0 * k as f64 / 12.0);
            for &eps in &[1e-3, 1e-2] {
                out.push(CylinderParams::with_tan(l0, tan, 1.0, eps).expect("sweep parameters are valid"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn length_examples() {
        let p = CylinderParams::new(1.3, 0.2, 1.0, 0.1).unwrap();
        assert!(rel(length_at(&p, 0.0), 1.69) < 1e-15);
        let q = CylinderParams::new(1.3, FRAC_PI_4, 1.0, 0.1).unwrap();
        for t in [-1.0, 0.3, 2.0] {
            assert!(rel(length_at(&q, t), 1.69 * (2.0 * t).cosh()) < 1e-12);
        }
        let (tm, vm) = length_minimum(&p);
        let grid = (0..20001).map(|i| -3.0 + 6.0 * i as f64 / 20000.0);
        let best = grid.map(|t| length_at(&p, t)).fold(f64::INFINITY, f64::min);
        assert!(rel(best, vm) < 1e-6);
        assert!(rel(length_at(&p, tm), vm) < 1e-12);
    }

    #[test]
    fn twist_examples() {
        let p = CylinderParams::new(0.8, 0.3, 2.0, 0.1).unwrap();
        assert!(rel(twist_at(&p, 0.0), 2.0 * 0.3f64.tan() / 0.64) < 1e-12);
        assert!(rel(twist_at(&p, 30.0), twist_limit(&p)) < 1e-12);
        let mut prev = twist_at(&p, -5.0);
        for i in 1..200 {
            let v = twist_at(&p, -5.0 + i as f64 * 0.05);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn crossing_residuals_and_vieta() {
        // tanθ₀ = 0.01 needs ε ≥ sin 2θ₀ ≈ 0.019998 to cross
        let miss = CylinderParams::with_tan(1.0, 0.01, 1.0, 0.01).unwrap();
        assert!(entry_exit_times(&miss).is_none());
        let p = CylinderParams::with_tan(1.0, 0.01, 1.0, 0.03).unwrap();
        let (t1, t2) = entry_exit_times(&p).unwrap();
        assert!(t1 > 0.0 && t2 > t1);
        assert!(rel((2.0 * t1).exp() * (2.0 * t2).exp(), 1e4) < 1e-12);
        assert!(rel(length_at(&p, t1), 0.03) < 1e-9 && rel(length_at(&p, t2), 0.03) < 1e-9);
    }

    #[test]
    fn tangency_gives_equal_times() {
        let theta: f64 = 0.1;
        let p = CylinderParams::new(1.0, theta, 1.0, (2.0 * theta).sin()).unwrap();
        let (t1, t2) = entry_exit_times(&p).unwrap_or((0.0, 1.0));
        assert!((t2 - t1).abs() < 1e-6);
        assert!(twist_difference(&p).unwrap_or(0.0) < 1e-4);
    }

    #[test]
    fn twist_difference_closed_form() {
        let p = CylinderParams::with_tan(0.5, 1e-3, 1.7, 1e-2).unwrap();
        let (t1, t2) = entry_exit_times(&p).unwrap();
        let direct = twist_at(&p, t2) - twist_at(&p, t1);
        assert!(rel(twist_difference(&p).unwrap(), direct) < 1e-9);
        let q = CylinderParams { area: 3.4, ..p };
        assert!(rel(twist_difference(&q).unwrap(), 2.0 * twist_difference(&p).unwrap()) < 1e-12);
    }

    #[test]
    fn comparison_scaling_and_limit() {
        let p = CylinderParams::with_tan(1.0, 1e-3, 1.0, 1e-2).unwrap();
        let q = CylinderParams::with_tan(2.0, 1e-3, 1.0, 4e-2).unwrap();
        let (a, b) = (excursion_comparison(&p).unwrap(), excursion_comparison(&q).unwrap());
        assert!(rel(a.ratio, b.ratio) < 1e-12);
        // deep limit θ₀ → 0: ratio → 2 sin φ_max / φ_max
        let deep = CylinderParams::new(1.0, 1e-9, 1.0, 1e-2).unwrap();
        let r = excursion_comparison(&deep).unwrap();
        assert!(rel(r.ratio, 2.0 * 1e-2 / 1e-2f64.asin()) < 1e-6);
        let near = CylinderParams::with_tan(1.0, 4e-3, 1.0, 1e-2).unwrap();
        assert!(matches!(excursion_comparison(&near), Err(Error::Hypothesis(_))));
    }
}
