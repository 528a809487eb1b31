use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

use super::{GroupElement, GroupPresentation, Mat2, MetricBall};
use crate::error::{Error, Result};
use crate::hyperbolic::distance;

/// Distances closer than this are treated as ties and broken by matrix order.
const TIE: f64 = 1e-12;

fn better<E: Ord>(d: f64, g: &E, best: &Option<(E, f64)>) -> bool {
    match best {
        None => true,
        Some((h, e)) => d < e - TIE || (d <= e + TIE && g < h),
    }
}

/// Closest orbit point `h·x₀` to `x` among ball elements of length at most
/// `search_radius`.
///
/// If the winner sits on the outermost searched sphere a closer point may
/// lie just outside, and the search reports [`Error::SearchExhausted`].
pub fn nearest_lattice_point<E: GroupElement>(
    ball: &MetricBall<E>,
    x0: C64,
    x: C64,
    search_radius: u32,
) -> Result<(E, f64)> {
    if search_radius > ball.radius {
        return Err(Error::BallTooSmall { have: ball.radius, need: search_radius });
    }
    let mut best: Option<(E, f64)> = None;
    let mut best_len = 0;
    for r in 0..=search_radius {
        for g in ball.sphere(r) {
            let d = distance(g.to_mobius().apply(x0), x);
            if better(d, g, &best) {
                best = Some((g.clone(), d));
                best_len = r;
            }
        }
    }
    if search_radius > 0 && best_len == search_radius {
        return Err(Error::SearchExhausted(search_radius));
    }
    best.ok_or(Error::SearchExhausted(search_radius))
}

/// Fast nearest orbit points for PSL(2,ℤ).
///
/// The query point is first reduced into the standard fundamental domain
/// `{|Re z| ≤ 1/2, |z| ≥ 1}`; the answer is then among a fixed finite set of
/// orbit points near that domain.
#[derive(Debug, Clone)]
pub struct ModularLocator {
    pub x0: C64,
    candidates: Vec<(Mat2<i64>, C64)>,
}

/// Word radius of the candidate set around the fundamental domain.
const CANDIDATE_RADIUS: u32 = 6;

impl ModularLocator {
    pub fn new(x0: C64) -> ModularLocator {
        let pres = GroupPresentation::modular();
        let ball = MetricBall::enumerate(&pres, CANDIDATE_RADIUS, 1 << 16).expect("small ball");
        let candidates = ball.elements().iter().map(|h| (h.clone(), h.to_mobius().apply(x0))).collect();
        ModularLocator { x0, candidates }
    }

    /// `(g, z)` with `x = g·z` and `z` in the standard fundamental domain.
    pub fn reduce(x: C64) -> Result<(Mat2<i64>, C64)> {
        if !(x.im > 0.0) {
            return Err(Error::NotInterior(x.im));
        }
        let s = Mat2::new(0, -1, 1, 0);
        let mut g = Mat2::<i64>::identity();
        let mut z = x;
        for _ in 0..100_000 {
            let n = z.re.round();
            if n != 0.0 {
                if n.abs() > 1e15 {
                    return Err(Error::Overflow);
                }
                z.re -= n;
                g = g.checked_compose(&Mat2::new(1, n as i64, 0, 1)).ok_or(Error::Overflow)?;
            }
            if z.norm_sqr() < 1.0 - 1e-15 {
                z = -z.inv();
                g = g.checked_compose(&s).ok_or(Error::Overflow)?;
            } else {
                return Ok((g, z));
            }
        }
        Err(Error::Overflow)
    }

    pub fn nearest(&self, x: C64) -> Result<(Mat2<i64>, f64)> {
        let (g, z) = ModularLocator::reduce(x)?;
        let mut best: Option<(Mat2<i64>, f64)> = None;
        for (h, p) in &self.candidates {
            let d = distance(*p, z);
            let gh = g.checked_compose(h).ok_or(Error::Overflow)?;
            if better(d, &gh, &best) {
                best = Some((gh, d));
            }
        }
        best.ok_or(Error::SearchExhausted(CANDIDATE_RADIUS))
    }
}

/// One-shot wrapper around [`ModularLocator::nearest`].
pub fn modular_nearest(x: C64, x0: C64) -> Result<(Mat2<i64>, f64)> {
    ModularLocator::new(x0).nearest(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::MODULAR_BASEPOINT;

    #[test]
    fn identity_and_orbit_points() {
        let p = GroupPresentation::modular();
        let ball = MetricBall::enumerate(&p, 9, 1 << 20).unwrap();
        let x0 = MODULAR_BASEPOINT;
        let (g, d) = nearest_lattice_point(&ball, x0, x0, 3).unwrap();
        assert_eq!(g, Mat2::identity());
        assert!(d < 1e-12);
        for g in ball.sphere(8).iter().take(40) {
            let x = g.to_mobius().apply(x0);
            let (h, d) = nearest_lattice_point(&ball, x0, x, 9).unwrap();
            assert_eq!(&h, g);
            assert!(d < 1e-9);
        }
    }

    #[test]
    fn reduction_lands_in_fundamental_domain() {
        for x in [C64::new(3.7, 0.01), C64::new(-0.3, 0.2), C64::new(0.1, 5.0)] {
            let (g, z) = ModularLocator::reduce(x).unwrap();
            assert!(z.re.abs() <= 0.5 + 1e-12 && z.norm() >= 1.0 - 1e-12);
            assert!((g.to_mobius().apply(z) - x).norm() < 1e-9);
        }
    }
}
