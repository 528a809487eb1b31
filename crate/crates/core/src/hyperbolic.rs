//! Hyperbolic plane geometry in curvature −1.
//!
//! Points live in the upper half-plane ℍ. The disc model 𝔻 is reached through
//! the Cayley map `z ↦ (z − i)/(z + i)`, which sends `i` to the origin and the
//! boundary point ∞ to the angle 0. A boundary angle θ corresponds to the
//! extended real `x = −cot(θ/2)`.

use core::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Allowed relative defect of `ad − bc` from 1 for floating matrices.
pub const DET_TOLERANCE: f64 = 1e-12;

/// Reduces an angle to [0, 2π).
pub fn wrap_angle(t: f64) -> f64 {
    let r = t % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point of ℝ ∪ {∞}, the boundary of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinity => None,
        }
    }

    /// Angle of this point on the disc-model circle, in [0, 2π).
    pub fn to_angle(self) -> f64 {
        match self {
            ExtReal::Infinity => 0.0,
            // x = −cot(θ/2) with θ/2 ∈ (0, π)
            ExtReal::Finite(x) => 2.0 * Float::atan2(1.0, -x),
        }
    }

    pub fn from_angle(theta: f64) -> ExtReal {
        let t = wrap_angle(theta);
        if t == 0.0 {
            return ExtReal::Infinity;
        }
        let h = 0.5 * t;
        ExtReal::Finite(-h.cos() / h.sin())
    }
}

/// A boundary point in whichever model it was produced in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    /// Angle on the unit circle of the disc model.
    Angle(f64),
    /// Point of ℝ ∪ {∞} in the half-plane model.
    Real(ExtReal),
}

impl BoundaryPoint {
    pub fn angle(self) -> f64 {
        match self {
            BoundaryPoint::Angle(t) => wrap_angle(t),
            BoundaryPoint::Real(x) => x.to_angle(),
        }
    }

    pub fn ext_real(self) -> ExtReal {
        match self {
            BoundaryPoint::Angle(t) => ExtReal::from_angle(t),
            BoundaryPoint::Real(x) => x,
        }
    }
}

impl From<ExtReal> for BoundaryPoint {
    fn from(x: ExtReal) -> Self {
        BoundaryPoint::Real(x)
    }
}

pub fn cayley(z: C64) -> C64 {
    (z - I) / (z + I)
}

pub fn cayley_inv(w: C64) -> C64 {
    I * (C64::new(1.0, 0.0) + w) / (C64::new(1.0, 0.0) - w)
}

/// Hyperbolic distance in the upper half-plane.
pub fn distance(z: C64, w: C64) -> f64 {
    let num = (z - w).norm();
    2.0 * (num / (2.0 * (z.im * w.im).sqrt())).asinh()
}

/// Hyperbolic distance in the unit disc.
pub fn disc_distance(z: C64, w: C64) -> f64 {
    let r = (z - w).norm() / (C64::new(1.0, 0.0) - w.conj() * z).norm();
    2.0 * r.atanh()
}

/// An orientation-preserving isometry `z ↦ (az + b)/(cz + d)` with `ad − bc = 1`.
///
/// Stored in canonical sign: the first nonzero of (a, b, c, d) is positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Mobius> {
        let det = a * d - b * c;
        let scale = ((a * d).abs() + (b * c).abs()).max(1.0);
        if !det.is_finite() || (det - 1.0).abs() > DET_TOLERANCE * scale {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Mobius { a, b, c, d }.canonical())
    }

    /// Scales a matrix of positive determinant to determinant 1.
    pub fn normalized(a: f64, b: f64, c: f64, d: f64) -> Result<Mobius> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::NotUnimodular(det));
        }
        let s = det.sqrt().recip();
        Ok(Mobius { a: a * s, b: b * s, c: c * s, d: d * s }.canonical())
    }

    fn canonical(self) -> Mobius {
        let first = [self.a, self.b, self.c, self.d].into_iter().find(|x| *x != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            Mobius { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
        .canonical()
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical()
    }

    pub fn apply(&self, z: C64) -> C64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    pub fn apply_boundary(&self, x: ExtReal) -> ExtReal {
        match x {
            ExtReal::Infinity => {
                if self.c == 0.0 {
                    ExtReal::Infinity
                } else {
                    ExtReal::Finite(self.a / self.c)
                }
            }
            ExtReal::Finite(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    ExtReal::Infinity
                } else {
                    ExtReal::Finite((self.a * x + self.b) / den)
                }
            }
        }
    }

    /// Acts on a boundary point, keeping its representation.
    pub fn apply_point(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Real(x) => BoundaryPoint::Real(self.apply_boundary(x)),
            BoundaryPoint::Angle(t) => {
                let (al, be) = self.to_su11();
                let w = C64::from_polar(1.0, t);
                let v = (al * w + be) / (be.conj() * w + al.conj());
                BoundaryPoint::Angle(wrap_angle(v.arg()))
            }
        }
    }

    /// The same isometry acting on the disc model.
    pub fn apply_disc(&self, w: C64) -> C64 {
        let (al, be) = self.to_su11();
        (al * w + be) / (be.conj() * w + al.conj())
    }

    /// Coefficients (α, β) of the disc form `w ↦ (αw + β)/(β̄w + ᾱ)`, |α|² − |β|² = 1.
    pub fn to_su11(&self) -> (C64, C64) {
        let al = C64::new(self.a + self.d, self.b - self.c) * 0.5;
        let be = C64::new(self.a - self.d, -(self.b + self.c)) * 0.5;
        (al, be)
    }

    /// The disc isometry `w ↦ e^{iθ}(w − a)/(1 − āw)` for |a| < 1.
    pub fn from_disc(theta: f64, a: C64) -> Result<Mobius> {
        let n2 = a.norm_sqr();
        if !(n2 < 1.0) {
            return Err(Error::Invalid("disc parameter must satisfy |a| < 1"));
        }
        let s = (1.0 - n2).sqrt().recip();
        let h = C64::from_polar(1.0, 0.5 * theta);
        let al = h * s;
        let be = -(h * a) * s;
        Ok(Mobius {
            a: al.re + be.re,
            b: al.im - be.im,
            c: -al.im - be.im,
            d: al.re - be.re,
        }
        .canonical())
    }

    /// The unique upward translation frame sending `i` to `z`, with ∞ fixed.
    pub fn frame_at(z: C64) -> Mobius {
        let s = z.im.sqrt();
        Mobius { a: s, b: z.re / s, c: 0.0, d: 1.0 / s }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0
    }

    /// Attracting and repelling fixed points of a hyperbolic map.
    pub fn fixed_points(&self) -> Option<(ExtReal, ExtReal)> {
        if !self.is_hyperbolic() {
            return None;
        }
        if self.c == 0.0 {
            // z ↦ (a z + b)/d: ∞ attracts iff |a| > |d|
            let x = self.b / (self.d - self.a);
            return Some(if self.a.abs() > self.d.abs() {
                (ExtReal::Infinity, ExtReal::Finite(x))
            } else {
                (ExtReal::Finite(x), ExtReal::Infinity)
            });
        }
        let t = self.trace();
        let disc = (t * t - 4.0).sqrt();
        let x1 = (self.a - self.d + disc) / (2.0 * self.c);
        let x2 = (self.a - self.d - disc) / (2.0 * self.c);
        // derivative at a fixed point x is 1/(cx + d)²
        if (self.c * x1 + self.d).abs() > 1.0 {
            Some((ExtReal::Finite(x1), ExtReal::Finite(x2)))
        } else {
            Some((ExtReal::Finite(x2), ExtReal::Finite(x1)))
        }
    }
}

/// Derivative of the circle map induced by `m` at a boundary point, measured
/// on the disc centered at `i`.
pub fn boundary_derivative(m: &Mobius, p: BoundaryPoint) -> f64 {
    let (al, be) = m.to_su11();
    let w = C64::from_polar(1.0, p.angle());
    1.0 / (be.conj() * w + al.conj()).norm_sqr()
}

/// `|f′(e^{it})| = (1 − A²)/(1 + A² − 2A cos(φ − t))` for `f(w) = e^{iθ}(w − a)/(1 − āw)`,
/// `a = A e^{iφ}`. The rotation θ does not enter.
pub fn disc_derivative(a: C64, t: f64) -> f64 {
    let big_a = a.norm();
    let phi = a.arg();
    (1.0 - big_a * big_a) / (1.0 + big_a * big_a - 2.0 * big_a * (phi - t).cos())
}

/// `sup_p log |m′(p)|`, which equals `d(i, m·i)`.
pub fn max_log_derivative(m: &Mobius) -> f64 {
    let (al, be) = m.to_su11();
    2.0 * (al.norm() + be.norm()).ln()
}

/// Angle subtended at the center of the unit disc by the intersection of the
/// unit-tangent circle of radius `r` with the centered circle of radius `big_r`.
pub fn sector_angle(r: f64, big_r: f64) -> Result<f64> {
    if !(big_r >= 0.5 && r <= 0.5 && r > 0.0 && big_r < 1.0) {
        return Err(Error::Invalid("sector_angle needs 0 < r ≤ 1/2 ≤ R < 1"));
    }
    let c = (1.0 - 2.0 * r + big_r * big_r) / (2.0 * big_r * (1.0 - r));
    if c > 1.0 + 1e-12 || big_r + 2.0 * r - 1.0 < -1e-15 {
        return Err(Error::NoIntersection);
    }
    Ok(2.0 * c.min(1.0).acos())
}

/// Euclidean diameter, in the disc centered at the basepoint, of a horoball
/// at hyperbolic distance `d` from the basepoint.
pub fn horoball_diameter(d: f64) -> f64 {
    2.0 / (1.0 + d.exp())
}

/// Inverse of [`horoball_diameter`].
pub fn horoball_distance(s: f64) -> f64 {
    ((2.0 - s) / s).ln()
}

/// Unit-speed geodesic ray `γ_t = frame(i·e^t)`, `t ≥ 0`, from `start` to `end`.
///
/// The frame also parameterizes the whole line for negative `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub start: C64,
    pub end: ExtReal,
    pub frame: Mobius,
}

impl Geodesic {
    pub fn from(start: C64, end: BoundaryPoint) -> Result<Geodesic> {
        if !(start.im > 0.0) || !start.re.is_finite() {
            return Err(Error::NotInterior(start.im));
        }
        let end = end.ext_real();
        let frame = match end {
            ExtReal::Infinity => Mobius::frame_at(start),
            ExtReal::Finite(p) => {
                // h(z) = −1/(z − p) sends p to ∞
                let h = Mobius { a: 0.0, b: -1.0, c: 1.0, d: -p };
                let g1 = Mobius::frame_at(h.apply(start));
                h.inverse().compose(&g1)
            }
        };
        Ok(Geodesic { start, end, frame })
    }

    pub fn point(&self, t: f64) -> C64 {
        self.frame.apply(C64::new(0.0, t.exp()))
    }

    /// The point at time `t` in the disc model.
    pub fn disc_point(&self, t: f64) -> C64 {
        cayley(self.point(t))
    }

    pub fn backward_endpoint(&self) -> ExtReal {
        self.frame.apply_boundary(ExtReal::Finite(0.0))
    }

    pub fn image(&self, m: &Mobius) -> Geodesic {
        Geodesic { start: m.apply(self.start), end: m.apply_boundary(self.end), frame: m.compose(&self.frame) }
    }

    /// Distance from `z` to the full geodesic line.
    pub fn distance_to_line(&self, z: C64) -> f64 {
        let w = self.frame.inverse().apply(z);
        (w.re.abs() / w.im).asinh()
    }

    /// Distance from `z` to the ray `{γ_t : t ≥ 0}`.
    pub fn distance_to_ray(&self, z: C64) -> f64 {
        let w = self.frame.inverse().apply(z);
        if w.norm() >= 1.0 {
            (w.re.abs() / w.im).asinh()
        } else {
            distance(w, I)
        }
    }
}

/// A closed horoball of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Horoball {
    /// `{Im z ≥ height}`.
    AtInfinity { height: f64 },
    /// Euclidean disc tangent to ℝ at `base` with the given diameter.
    Finite { base: f64, diameter: f64 },
}

impl Horoball {
    /// Horoball tangent at the boundary angle `theta` whose Euclidean diameter
    /// in the disc centered at `i` is `size`.
    pub fn from_disc(theta: f64, size: f64) -> Result<Horoball> {
        if !(size > 0.0 && size <= 1.0) {
            return Err(Error::Invalid("horoball size must lie in (0, 1]"));
        }
        let h = Horoball::AtInfinity { height: horoball_distance(size).exp() };
        Ok(h.image(&Mobius::from_disc(theta, C64::new(0.0, 0.0))?))
    }

    pub fn base(&self) -> ExtReal {
        match *self {
            Horoball::AtInfinity { .. } => ExtReal::Infinity,
            Horoball::Finite { base, .. } => ExtReal::Finite(base),
        }
    }

    /// An isometry `n` with `n(H) = {Im ≥ 1}`.
    pub fn normalizer(&self) -> Mobius {
        match *self {
            Horoball::AtInfinity { height } => {
                let s = height.sqrt();
                Mobius { a: 1.0 / s, b: 0.0, c: 0.0, d: s }
            }
            Horoball::Finite { base, diameter } => {
                let s = diameter.sqrt();
                Mobius { a: 0.0, b: -s, c: 1.0 / s, d: -base / s }
            }
        }
    }

    /// The horoball `n⁻¹({Im ≥ 1})`.
    pub fn from_normalizer(n: &Mobius) -> Horoball {
        let inv = n.inverse();
        if inv.c == 0.0 {
            Horoball::AtInfinity { height: inv.a / inv.d }
        } else {
            Horoball::Finite { base: inv.a / inv.c, diameter: 1.0 / (inv.c * inv.c) }
        }
    }

    pub fn image(&self, m: &Mobius) -> Horoball {
        Horoball::from_normalizer(&self.normalizer().compose(&m.inverse()))
    }

    /// Signed distance from ∂H, positive inside.
    pub fn depth(&self, z: C64) -> f64 {
        self.normalizer().apply(z).im.ln()
    }

    pub fn contains(&self, z: C64) -> bool {
        self.depth(z) >= 0.0
    }

    /// Hyperbolic distance from `z` to H (0 inside).
    pub fn distance_from(&self, z: C64) -> f64 {
        (-self.depth(z)).max(0.0)
    }

    /// Closest-point projection of an outside point onto ∂H.
    pub fn project(&self, z: C64) -> C64 {
        let n = self.normalizer();
        let w = n.apply(z);
        n.inverse().apply(C64::new(w.re, 1.0))
    }

    /// Horocyclic distance along ∂H between two points of ∂H.
    pub fn boundary_distance(&self, z: C64, w: C64) -> f64 {
        let n = self.normalizer();
        (n.apply(z).re - n.apply(w).re).abs()
    }

    /// Euclidean diameter of H in the disc centered at `i`, `None` if H contains `i`.
    pub fn disc_size(&self) -> Option<f64> {
        let d = self.distance_from(I);
        if self.depth(I) > 0.0 {
            None
        } else {
            Some(horoball_diameter(d))
        }
    }
}

/// How a geodesic ray meets a horoball.
///
/// Times use the parameterization of the full line, so a ray starting
/// inside the horoball reports a negative entry time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EntryExit {
    Miss,
    Tangent { t: f64 },
    Crossing { entry: f64, exit: f64 },
    /// The geodesic ends at the base of H.
    IntoCusp { entry: f64 },
    /// The geodesic starts at the base of H.
    FromCusp { exit: f64 },
}

impl EntryExit {
    pub fn times(&self) -> Option<(f64, f64)> {
        match *self {
            EntryExit::Tangent { t } => Some((t, t)),
            EntryExit::Crossing { entry, exit } => Some((entry, exit)),
            _ => None,
        }
    }
}

/// Closed-form entry and exit times of the ray `g` in `h`.
pub fn entry_exit(g: &Geodesic, h: &Horoball) -> EntryExit {
    match entry_exit_line(g, h) {
        EntryExit::Crossing { exit, .. } | EntryExit::FromCusp { exit } if exit < 0.0 => EntryExit::Miss,
        EntryExit::Tangent { t } if t < 0.0 => EntryExit::Miss,
        other => other,
    }
}

/// Closed-form entry and exit times of the whole line through `g` in `h`.
pub fn entry_exit_line(g: &Geodesic, h: &Horoball) -> EntryExit {
    let f = h.normalizer().compose(&g.frame);
    let (c, d) = (f.c, f.d);
    // Im f(iy) = y/(c²y² + d²) ≥ 1  ⇔  c²y² − y + d² ≤ 0
    if c == 0.0 {
        return EntryExit::IntoCusp { entry: 2.0 * d.abs().ln() };
    }
    if d == 0.0 {
        return EntryExit::FromCusp { exit: -2.0 * c.abs().ln() };
    }
    let disc = 1.0 - 4.0 * c * c * d * d;
    if disc < 0.0 {
        return EntryExit::Miss;
    }
    let s = disc.sqrt();
    let y2 = (1.0 + s) / (2.0 * c * c);
    let y1 = 2.0 * d * d / (1.0 + s);
    if s == 0.0 {
        return EntryExit::Tangent { t: y2.ln() };
    }
    EntryExit::Crossing { entry: y1.ln(), exit: y2.ln() }
}

/// Horocyclic length of ∂H between the entry and exit points of `g`.
pub fn excursion_boundary(g: &Geodesic, h: &Horoball) -> Result<f64> {
    match entry_exit(g, h) {
        EntryExit::Miss => Err(Error::NoCrossing),
        EntryExit::IntoCusp { .. } | EntryExit::FromCusp { .. } => Err(Error::NeverExits),
        EntryExit::Tangent { .. } => Ok(0.0),
        EntryExit::Crossing { .. } => {
            let f = h.normalizer().compose(&g.frame);
            let cd = (f.c * f.d).abs();
            Ok((1.0 - 4.0 * cd * cd).max(0.0).sqrt() / cd)
        }
    }
}

/// Visual excursion φ_max/φ₀ seen from `g.start`.
///
/// φ₀ is the angle at the basepoint between `g` and the ray to the base of
/// `h`; φ_max is the angle between that ray and a ray tangent to `h`.
pub fn excursion_visual(g: &Geodesic, h: &Horoball) -> Result<f64> {
    let dist = -h.depth(g.start);
    if dist <= 0.0 {
        return Err(Error::BasepointInside);
    }
    let chart = Mobius::frame_at(g.start).inverse();
    let ang = |x: ExtReal| chart.apply_boundary(x).to_angle();
    let mut phi0 = (ang(g.end) - ang(h.base())).abs();
    if phi0 > PI {
        phi0 = TAU - phi0;
    }
    let phi_max = (-dist).exp().asin();
    if phi0 > phi_max * (1.0 + 1e-12) {
        return Err(Error::NoCrossing);
    }
    if phi0 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((phi_max / phi0).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    const S: Mobius = Mobius { a: 0.0, b: -1.0, c: 1.0, d: 0.0 };
    const T: Mobius = Mobius { a: 1.0, b: 1.0, c: 0.0, d: 1.0 };

    #[test]
    fn apply_examples() {
        let z = C64::new(0.3, 0.4);
        assert_eq!(Mobius::IDENTITY.apply(z), z);
        assert!((S.apply(I) - I).norm() < 1e-15);
        assert!((T.apply(I) - C64::new(1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn compose_and_inverse_examples() {
        let tt = T.compose(&T);
        assert_eq!(tt, Mobius { a: 1.0, b: 2.0, c: 0.0, d: 1.0 });
        // adjugate of S is [[0,1],[-1,0]], canonical sign flips it back to S
        let si = S.inverse();
        assert_eq!(si, Mobius { a: 0.0, b: 1.0, c: -1.0, d: 0.0 }.canonical());
        assert_eq!(si, Mobius { a: 0.0, b: 1.0, c: -1.0, d: 0.0 });
        let m = Mobius::new(2.0, 1.0, 3.0, 2.0).unwrap();
        let id = m.compose(&m.inverse());
        assert!(close(id.a, 1.0, 1e-15) && id.b.abs() < 1e-15 && id.c.abs() < 1e-15);
    }

    #[test]
    fn canonical_sign() {
        let m = Mobius::new(-1.0, 0.0, 0.0, -1.0).unwrap();
        assert_eq!(m, Mobius::IDENTITY);
        assert!(Mobius::new(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(I, I), 0.0);
        let e = core::f64::consts::E;
        assert!(close(distance(I, I * e), 1.0, 1e-15));
        assert!(close(disc_distance(C64::new(0.0, 0.0), C64::new(0.5, 0.0)), 3f64.ln(), 1e-15));
    }

    #[test]
    fn boundary_conversion_round_trip() {
        for k in 0..1000 {
            let t = 0.001 + k as f64 * (TAU - 0.002) / 1000.0;
            let x = ExtReal::from_angle(t);
            assert!(close(x.to_angle(), t, 1e-12), "{t}");
        }
        assert_eq!(ExtReal::Infinity.to_angle(), 0.0);
        assert_eq!(ExtReal::from_angle(0.0), ExtReal::Infinity);
        // x = 0 sits at the bottom of the circle
        assert!(close(ExtReal::Finite(0.0).to_angle(), PI, 1e-15));
        let w = cayley(C64::new(0.0, 0.0) + C64::new(1e-300, 0.0));
        assert!(close(w.arg().abs(), PI, 1e-12));
    }

    #[test]
    fn geodesic_examples() {
        let g = Geodesic::from(I, BoundaryPoint::Real(ExtReal::Infinity)).unwrap();
        for t in [0.0, 0.5, 2.0] {
            assert!((g.point(t) - I * t.exp()).norm() < 1e-12);
            // radial geodesic in the disc: tanh(t/2)
            assert!((g.disc_point(t) - C64::new((0.5 * t).tanh(), 0.0)).norm() < 1e-12);
        }
        assert!(close(distance(g.point(0.0), g.point(2.0)), 2.0, 1e-12));
        let g = Geodesic::from(C64::new(0.3, 0.7), BoundaryPoint::Real(ExtReal::Finite(2.5))).unwrap();
        assert!((g.point(0.0) - C64::new(0.3, 0.7)).norm() < 1e-12);
        let far = g.point(30.0);
        assert!((far.re - 2.5).abs() < 1e-9 && far.im < 1e-9);
        assert!(close(distance(g.point(-1.3), g.point(2.1)), 3.4, 1e-9));
    }

    #[test]
    fn entry_exit_examples() {
        let g = Geodesic::from(I, BoundaryPoint::Real(ExtReal::Infinity)).unwrap();
        let h = Horoball::AtInfinity { height: 2.0 };
        match entry_exit(&g, &h) {
            EntryExit::IntoCusp { entry } => assert!(close(entry, 2f64.ln(), 1e-15)),
            other => panic!("{other:?}"),
        }
        let g = Geodesic::from(I, BoundaryPoint::Real(ExtReal::Finite(0.1))).unwrap();
        assert_eq!(entry_exit(&g, &h), EntryExit::Miss);
        assert_eq!(excursion_boundary(&g, &h), Err(Error::NoCrossing));
    }

    #[test]
    fn excursion_boundary_chord_oracle() {
        // semicircle of radius R over 0, horoball Im ≥ h
        let (r, h) = (5.0, 1.5);
        let g = Geodesic::from(C64::new(-r + 1e-3, (r * r - (r - 1e-3f64).powi(2)).sqrt()), BoundaryPoint::Real(ExtReal::Finite(r))).unwrap();
        let e = excursion_boundary(&g, &Horoball::AtInfinity { height: h }).unwrap();
        let oracle = 2.0 * (r * r - h * h).sqrt() / h;
        assert!(close(e, oracle, 1e-9), "{e} {oracle}");
    }

    #[test]
    fn tangent_geodesic_has_zero_excursion() {
        // semicircle of radius 1 over 0 is tangent to Im ≥ 1
        let g = Geodesic::from(C64::new(-0.6, 0.8), BoundaryPoint::Real(ExtReal::Finite(1.0))).unwrap();
        let h = Horoball::AtInfinity { height: 1.0 };
        let e = excursion_boundary(&g, &h).unwrap_or(0.0);
        assert!(e < 1e-6);
    }

    #[test]
    fn visual_excursion_examples() {
        let h = Horoball::AtInfinity { height: 3.0 };
        let cusp_ray = Geodesic::from(I, BoundaryPoint::Real(ExtReal::Infinity)).unwrap();
        assert_eq!(excursion_visual(&cusp_ray, &h), Ok(f64::INFINITY));
        // the ray from i tangent to Im ≥ 3: φ_max with sin φ_max = 1/3
        let phi_max = (1.0f64 / 3.0).asin();
        let tangent = Geodesic::from(I, BoundaryPoint::Angle(phi_max)).unwrap();
        assert!(close(excursion_visual(&tangent, &h).unwrap(), 1.0, 1e-9));
        let steep = Geodesic::from(I, BoundaryPoint::Angle(phi_max / 4.0)).unwrap();
        assert!(close(excursion_visual(&steep, &h).unwrap(), 4.0, 1e-9));
        let miss = Geodesic::from(I, BoundaryPoint::Angle(2.0 * phi_max)).unwrap();
        assert_eq!(excursion_visual(&miss, &h), Err(Error::NoCrossing));
    }

    #[test]
    fn derivative_examples() {
        let p = BoundaryPoint::Angle(0.7);
        assert!(close(boundary_derivative(&Mobius::IDENTITY, p), 1.0, 1e-15));
        let m = Mobius::from_disc(0.0, C64::new(0.5, 0.0)).unwrap();
        assert!(close(boundary_derivative(&m, BoundaryPoint::Angle(0.0)), 3.0, 1e-12));
        assert!(close(disc_derivative(C64::new(0.5, 0.0), 0.0), 3.0, 1e-15));
        let a = C64::from_polar(0.8, 1.1);
        let m = Mobius::from_disc(0.4, a).unwrap();
        assert!(close(boundary_derivative(&m, BoundaryPoint::Angle(1.1)), 1.8 / 0.2, 1e-12));
        assert!(close(max_log_derivative(&m), (1.8f64 / 0.2).ln(), 1e-12));
        assert_eq!(max_log_derivative(&Mobius::IDENTITY), 0.0);
        // |m·0| = 0.5 in the disc gives log 3
        let m = Mobius::from_disc(1.0, C64::new(0.0, -0.5)).unwrap();
        assert!(close(m.apply_disc(C64::new(0.0, 0.0)).norm(), 0.5, 1e-12));
        assert!(close(max_log_derivative(&m), 3f64.ln(), 1e-12));
    }

    #[test]
    fn disc_form_matches_cayley_conjugation() {
        let m = Mobius::new(2.0, 1.0, 3.0, 2.0).unwrap();
        for z in [I, C64::new(0.3, 2.0), C64::new(-4.0, 0.01)] {
            let lhs = m.apply_disc(cayley(z));
            let rhs = cayley(m.apply(z));
            assert!((lhs - rhs).norm() < 1e-12);
        }
        let a = C64::new(0.2, -0.3);
        let m = Mobius::from_disc(0.9, a).unwrap();
        let w = C64::new(0.1, 0.4);
        let direct = C64::from_polar(1.0, 0.9) * (w - a) / (C64::new(1.0, 0.0) - a.conj() * w);
        assert!((m.apply_disc(w) - direct).norm() < 1e-12);
    }

    #[test]
    fn sector_angle_examples() {
        assert!(close(sector_angle(0.5, 0.5).unwrap(), 2.0 * PI / 3.0, 1e-12));
        assert!(sector_angle(0.25, 0.5).unwrap().abs() < 1e-7);
        assert_eq!(sector_angle(0.1, 0.5), Err(Error::NoIntersection));
    }

    #[test]
    fn horoball_size_examples() {
        assert_eq!(horoball_diameter(0.0), 1.0);
        assert!(close(horoball_diameter(3f64.ln()), 0.5, 1e-15));
        for s in [0.01, 0.3, 0.77, 0.999] {
            assert!(close(horoball_diameter(horoball_distance(s)), s, 1e-12));
        }
        let h = Horoball::from_disc(1.3, 0.4).unwrap();
        assert!(close(h.disc_size().unwrap(), 0.4, 1e-12));
        assert!(close(h.distance_from(I), horoball_distance(0.4), 1e-12));
    }

    #[test]
    fn fixed_points_of_hyperbolic_map() {
        let m = Mobius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let (att, rep) = m.fixed_points().unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(close(att.finite().unwrap(), phi, 1e-12));
        assert!(close(rep.finite().unwrap(), 1.0 - phi, 1e-12));
    }
}
