//! The Lyapunov expansion exponent and the estimates that bound it.
//!
//! Boundary derivatives here are taken in the visual metric seen from the
//! basepoint `x0`: the map is conjugated by a frame sending `i` to `x0` and
//! differentiated on the unit circle. For a ball of radius R,
//! `max_{g ∈ B(R)} (1/R)·log g′(p)` is computed by exhaustive scan.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64 as C64;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{nearest_lattice_point, GroupElement, MetricBall, ModularLocator};
use crate::hyperbolic::{boundary_derivative, distance, BoundaryPoint, EntryExit, Geodesic, Horoball, Mobius};
use crate::modular::exact_lengths;
use crate::modular::UniformReal;

/// Derivative of `m` at `p` in the visual metric from `x0`.
pub fn visual_derivative(m: &Mobius, p: BoundaryPoint, x0: C64) -> f64 {
    let f = Mobius::frame_at(x0);
    let fi = f.inverse();
    boundary_derivative(&fi.compose(m).compose(&f), fi.apply_point(p))
}

/// A boundary point uniform in the visual measure from `x0`.
pub fn sample_visual(seed: u64, x0: C64) -> BoundaryPoint {
    let theta = TAU * UniformReal::new(seed).to_f64();
    Mobius::frame_at(x0).apply_point(BoundaryPoint::Angle(theta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapEstimate {
    pub p: BoundaryPoint,
    pub radii: Vec<u32>,
    /// `max_{g ∈ B(R)} (1/R)·log g′(p)`, 0 at `R = 0`.
    pub values: Vec<f64>,
    /// Ball index of a maximizer for each radius.
    pub witnesses: Vec<usize>,
}

/// Exact maximum over the enumerated ball at each radius.
pub fn lyap_estimate<E: GroupElement>(p: BoundaryPoint, radii: &[u32], ball: &MetricBall<E>, x0: C64) -> Result<LyapEstimate> {
    let rmax = radii.iter().copied().max().unwrap_or(0);
    if rmax > ball.radius {
        return Err(Error::BallTooSmall { have: ball.radius, need: rmax });
    }
    // running maximum of log g′(p) over spheres 0..=r
    let mut best = Vec::with_capacity(rmax as usize + 1);
    let mut acc = (0.0, 0usize);
    let mut idx = 0usize;
    for r in 0..=rmax {
        for g in ball.sphere(r) {
            let v = visual_derivative(&g.to_mobius(), p, x0).ln();
            if v > acc.0 {
                acc = (v, idx);
            }
            idx += 1;
        }
        best.push(acc);
    }
    let values = radii.iter().map(|&r| if r == 0 { 0.0 } else { best[r as usize].0 / r as f64 }).collect();
    let witnesses = radii.iter().map(|&r| best[r as usize].1).collect();
    Ok(LyapEstimate { p, radii: radii.to_vec(), values, witnesses })
}

/// Whether `g·x0` lies in the half-space of points at least as close to
/// `γ_{2T}` as to `x0`.
pub fn halfspace_member(gx0: C64, g: &Geodesic, t: f64) -> bool {
    distance(g.start, gx0) >= distance(g.point(2.0 * t), gx0)
}

/// Word length of the orbit point nearest a given interior point.
pub trait NearestLength {
    fn nearest_length(&self, z: C64) -> Result<u64>;
}

/// PSL(2,ℤ) with {S, T, T⁻¹}: exact for every point.
#[derive(Debug, Clone)]
pub struct ModularNearest(pub ModularLocator);

impl NearestLength for ModularNearest {
    fn nearest_length(&self, z: C64) -> Result<u64> {
        let (h, _) = self.0.nearest(z)?;
        Ok(exact_lengths(h.a as i128, h.b as i128, h.c as i128, h.d as i128)?.word)
    }
}

/// Any presentation, by scanning a ball out to `search_radius`.
#[derive(Debug, Clone, Copy)]
pub struct BallNearest<'a, E> {
    pub ball: &'a MetricBall<E>,
    pub x0: C64,
    pub search_radius: u32,
}

impl<E: GroupElement> NearestLength for BallNearest<'_, E> {
    fn nearest_length(&self, z: C64) -> Result<u64> {
        let (h, _) = nearest_lattice_point(self.ball, self.x0, z, self.search_radius)?;
        self.ball.word_length(&h).exact().map(u64::from).ok_or(Error::SearchExhausted(self.search_radius))
    }
}

/// One `(γ, T)` instance of the shadow bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowInstance {
    pub t: f64,
    /// `d_G(1, h_T)`.
    pub h_length: u64,
    /// Least word length of a half-space member; when no ball element is a
    /// member this is `radius + 1`, a lower bound.
    pub min_member: u64,
    pub saturated: bool,
}

impl ShadowInstance {
    pub fn holds(&self, k: f64, k_prime: f64) -> bool {
        self.min_member as f64 >= self.h_length as f64 / k - k_prime
    }
}

pub fn shadow_instance<E: GroupElement, N: NearestLength>(
    g: &Geodesic,
    t: f64,
    ball: &MetricBall<E>,
    x0: C64,
    locator: &N,
) -> Result<ShadowInstance> {
    let h_length = locator.nearest_length(g.point(t))?;
    let mut min_member = None;
    'outer: for r in 0..=ball.radius {
        for e in ball.sphere(r) {
            if halfspace_member(e.to_mobius().apply(x0), g, t) {
                min_member = Some(r as u64);
                break 'outer;
            }
        }
    }
    Ok(ShadowInstance {
        t,
        h_length,
        min_member: min_member.unwrap_or(ball.radius as u64 + 1),
        saturated: min_member.is_none(),
    })
}

/// Smallest `K` making the bound hold on every instance with `K′` fixed, or
/// `None` if some instance has a member of length ≤ −K′.
pub fn fit_shadow_k(instances: &[ShadowInstance], k_prime: f64) -> Option<f64> {
    let mut k = 1.0f64;
    for s in instances {
        let denom = s.min_member as f64 + k_prime;
        if s.h_length == 0 {
            continue;
        }
        if denom <= 0.0 {
            return None;
        }
        k = k.max(s.h_length as f64 / denom);
    }
    Some(k)
}

/// `ψ` with `tan ψ = tanh(L − T)/sinh T`.
pub fn angle_lower_bound(l: f64, t: f64) -> Result<f64> {
    if !(l > t && l >= 2.0 * t) {
        return Err(Error::Hypothesis("need L > T and L ≥ 2T"));
    }
    if !(t.tanh() > 0.5) {
        return Err(Error::Hypothesis("need tanh T > 1/2"));
    }
    Ok(((l - t).tanh() / t.sinh()).atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub t: f64,
    /// `⌊d_G(1, h_T)/K − K′⌋`.
    pub r_t: i64,
    pub max_derivative: f64,
    /// Ball index of the maximizer.
    pub witness: usize,
    /// `max_derivative / e^{2T}`.
    pub ratio: f64,
}

/// Largest visual derivative at the endpoint of `γ` over `B(R_T)`.
pub fn derivative_bound_check<E: GroupElement, N: NearestLength>(
    g: &Geodesic,
    t: f64,
    ball: &MetricBall<E>,
    locator: &N,
    k: f64,
    k_prime: f64,
) -> Result<DerivativeReport> {
    let h = locator.nearest_length(g.point(t))?;
    let r_t = (h as f64 / k - k_prime).floor() as i64;
    if r_t < 1 {
        return Err(Error::Hypothesis("R_T < 1"));
    }
    if r_t > ball.radius as i64 {
        return Err(Error::BallTooSmall { have: ball.radius, need: r_t as u32 });
    }
    let x0 = g.start;
    let p = BoundaryPoint::Real(g.end);
    let mut best = (0.0f64, 0usize);
    let mut idx = 0;
    for r in 0..=r_t as u32 {
        for e in ball.sphere(r) {
            let v = visual_derivative(&e.to_mobius(), p, x0);
            if v > best.0 {
                best = (v, idx);
            }
            idx += 1;
        }
    }
    Ok(DerivativeReport { t, r_t, max_derivative: best.0, witness: best.1, ratio: best.0 / (2.0 * t).exp() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpReport {
    /// Distinct values of `d_G(1, h_T)` in increasing order.
    pub values: Vec<u64>,
    pub max_gap: u64,
}

/// Distinct word lengths of `h_T` on the grid `0, dt, …, T_max`.
pub fn jump_gaps<N: NearestLength>(g: &Geodesic, t_max: f64, dt: f64, locator: &N) -> Result<JumpReport> {
    let steps = (t_max / dt).round() as usize;
    let mut values = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        values.push(locator.nearest_length(g.point(i as f64 * dt))?);
    }
    values.sort_unstable();
    values.dedup();
    let max_gap = values.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    Ok(JumpReport { values, max_gap })
}

/// Horocyclic distance on `∂H` between the entry point of `γ` and the
/// closest-point projection of its start `y`.
pub fn entry_point_stability(h: &Horoball, g: &Geodesic) -> Result<f64> {
    let y = g.start;
    if h.contains(y) {
        return Err(Error::BasepointInside);
    }
    let u = match crate::hyperbolic::entry_exit(g, h) {
        EntryExit::Crossing { entry, .. } | EntryExit::IntoCusp { entry } => entry,
        EntryExit::Tangent { t } => t,
        _ => return Err(Error::NoCrossing),
    };
    Ok(h.boundary_distance(g.point(u), h.project(y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupPresentation, Mat2, MODULAR_BASEPOINT};
    use crate::hyperbolic::ExtReal;

    #[test]
    fn zero_radius_and_fixed_point_control() {
        let pres = GroupPresentation::modular();
        let ball = MetricBall::enumerate(&pres, 8, 1 << 20).unwrap();
        let x0 = MODULAR_BASEPOINT;
        let h = Mat2::new(2i64, 1, 1, 1);
        let m = h.to_mobius();
        let (att, _) = m.fixed_points().unwrap();
        let p = BoundaryPoint::Real(att);
        let m_len = ball.word_length(&h).exact().unwrap();
        let est = lyap_estimate(p, &[0, m_len], &ball, x0).unwrap();
        assert_eq!(est.values[0], 0.0);
        let lambda: f64 = (3.0 + 5f64.sqrt()) / 2.0;
        // h⁻¹ expands at the attracting point of h by λ²
        assert!(est.values[1] >= (lambda * lambda).ln() / m_len as f64 - 1e-9);
        assert!((visual_derivative(&m.inverse(), p, x0) - lambda * lambda).abs() < 1e-9);
    }

    #[test]
    fn halfspace_examples() {
        let x0 = MODULAR_BASEPOINT;
        let g = Geodesic::from(x0, BoundaryPoint::Real(ExtReal::Finite(3.0))).unwrap();
        assert!(!halfspace_member(x0, &g, 1.0));
        assert!(halfspace_member(g.point(2.0), &g, 1.0));
    }

    #[test]
    fn angle_examples() {
        let psi = angle_lower_bound(4.0, 2.0).unwrap();
        // atan(tanh 2 / sinh 2) = atan(0.265802…)
        assert!((psi - 0.259_795_170_429).abs() < 1e-11);
        assert!(angle_lower_bound(5.0, 2.0).unwrap() > psi);
        assert!(angle_lower_bound(3.0, 2.0).is_err());
        assert!(angle_lower_bound(1.0, 0.5).is_err());
    }

    #[test]
    fn cusp_ray_has_zero_entry_offset() {
        let h = Horoball::Finite { base: 0.5, diameter: 0.25 };
        let g = Geodesic::from(C64::new(0.5, 2.0), BoundaryPoint::Real(ExtReal::Finite(0.5))).unwrap();
        assert!(entry_point_stability(&h, &g).unwrap() < 1e-12);
    }
}
