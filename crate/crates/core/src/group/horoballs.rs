use alloc::vec::Vec;

use hashbrown::HashMap;
use num_complex::Complex64 as C64;
use num_integer::Integer;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{distance, entry_exit, excursion_boundary, BoundaryPoint, EntryExit, ExtReal, Geodesic, Horoball};

/// Identifies a horoball within its family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HoroballId {
    /// Position in an explicit list.
    Index(u64),
    /// Ford circle at `p/q`; `q = 0` is the horoball at ∞.
    Fraction(i64, u64),
    /// Ford circle at the k-th convergent of a modular geodesic's endpoint.
    Convergent(u64),
}

/// One passage of a geodesic through a horoball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcursionRecord {
    pub horoball: HoroballId,
    pub entry: f64,
    /// `+∞` when the geodesic ends at the horoball's base.
    pub exit: f64,
    /// Horocyclic length between entry and exit points (`+∞` if never exits).
    pub excursion: f64,
    /// Greatest distance reached past the horoball boundary.
    pub depth: f64,
}

impl ExcursionRecord {
    pub fn never_exits(&self) -> bool {
        self.exit == f64::INFINITY
    }
}

/// A locally finite family of horoballs with a candidate search.
pub trait HoroballFamily {
    /// Every horoball meeting `{γ_t : t0 ≤ t ≤ t1}` is in the returned list;
    /// extra entries are allowed.
    fn candidates(&self, g: &Geodesic, t0: f64, t1: f64) -> Result<Vec<(HoroballId, Horoball)>>;
}

/// An explicit finite family.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HoroballList(pub Vec<Horoball>);

impl HoroballFamily for HoroballList {
    fn candidates(&self, _: &Geodesic, _: f64, _: f64) -> Result<Vec<(HoroballId, Horoball)>> {
        Ok(self.0.iter().enumerate().map(|(i, h)| (HoroballId::Index(i as u64), *h)).collect())
    }
}

/// Ford circles shrunk by `rho ∈ (0, 1]`: diameter `rho/q²` at `p/q`, and
/// `{Im ≥ 1/rho}` at ∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FordFamily {
    pub rho: f64,
}

/// Refuses searches that would list more horoballs than this.
const CANDIDATE_LIMIT: u64 = 10_000_000;

impl FordFamily {
    pub fn new(rho: f64) -> Result<FordFamily> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Invalid("Ford shrink factor must lie in (0, 1]"));
        }
        Ok(FordFamily { rho })
    }

    pub fn horoball(&self, p: i64, q: u64) -> Horoball {
        if q == 0 {
            return Horoball::AtInfinity { height: 1.0 / self.rho };
        }
        let qf = q as f64;
        Horoball::Finite { base: p as f64 / qf, diameter: self.rho / (qf * qf) }
    }
}

/// Euclidean bounding box of the arc `γ([a, b])`.
fn arc_box(g: &Geodesic, a: f64, b: f64) -> (f64, f64, f64, f64) {
    let (p, q) = (g.point(a), g.point(b));
    let (xlo, xhi) = (p.re.min(q.re), p.re.max(q.re));
    let ylo = p.im.min(q.im);
    let mut yhi = p.im.max(q.im);
    let (c, d) = (g.frame.c, g.frame.d);
    if c != 0.0 && d != 0.0 {
        // Im γ_t = e^t/(c²e^{2t} + d²) peaks at e^t = |d/c|
        let t = (d / c).abs().ln();
        if t > a && t < b {
            yhi = yhi.max(1.0 / (2.0 * (c * d).abs()));
        }
    }
    (xlo, xhi, ylo, yhi)
}

impl HoroballFamily for FordFamily {
    fn candidates(&self, g: &Geodesic, t0: f64, t1: f64) -> Result<Vec<(HoroballId, Horoball)>> {
        let mut seen: HashMap<(i64, u64), ()> = HashMap::new();
        let mut out = Vec::new();
        let pieces = ((t1 - t0).ceil() as usize).max(1);
        let step = (t1 - t0) / pieces as f64;
        let mut total = 0u64;
        for k in 0..pieces {
            let a = t0 + k as f64 * step;
            let (xlo, xhi, ylo, yhi) = arc_box(g, a, a + step);
            if yhi >= 1.0 / self.rho && seen.insert((1, 0), ()).is_none() {
                out.push((HoroballId::Fraction(1, 0), self.horoball(1, 0)));
            }
            if !(ylo > 0.0) {
                return Err(Error::Invalid("arc touches the boundary"));
            }
            let qmax = (self.rho / ylo).sqrt().floor() as u64;
            for q in 1..=qmax {
                let qf = q as f64;
                let half = 0.5 * self.rho / (qf * qf);
                let plo = ((xlo - half) * qf).floor() as i64;
                let phi = ((xhi + half) * qf).ceil() as i64;
                total += (phi - plo + 1) as u64;
                if total > CANDIDATE_LIMIT {
                    return Err(Error::Invalid("too many Ford circle candidates; shorten the window"));
                }
                for p in plo..=phi {
                    if p.gcd(&(q as i64)) == 1 && seen.insert((p, q), ()).is_none() {
                        out.push((HoroballId::Fraction(p, q), self.horoball(p, q)));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn depth_of_chord(g: &Geodesic, h: &Horoball) -> f64 {
    let f = h.normalizer().compose(&g.frame);
    -(2.0 * (f.c * f.d).abs()).ln()
}

/// Time-ordered passages of `γ([0, T])` through horoballs of the family.
///
/// Passages of zero length, including tangencies and a start point on a
/// horoball boundary heading out, are omitted.
pub fn excursion_trace<F: HoroballFamily + ?Sized>(g: &Geodesic, family: &F, t: f64) -> Result<Vec<ExcursionRecord>> {
    if t <= 0.0 {
        return Ok(Vec::new());
    }
    const EPS: f64 = 1e-9;
    let mut out = Vec::new();
    for (id, h) in family.candidates(g, 0.0, t)? {
        match entry_exit(g, &h) {
            EntryExit::Crossing { entry, exit } => {
                if exit > EPS && entry < t {
                    out.push(ExcursionRecord {
                        horoball: id,
                        entry,
                        exit,
                        excursion: excursion_boundary(g, &h)?,
                        depth: depth_of_chord(g, &h),
                    });
                }
            }
            EntryExit::IntoCusp { entry } => {
                if entry < t {
                    out.push(ExcursionRecord {
                        horoball: id,
                        entry,
                        exit: f64::INFINITY,
                        excursion: f64::INFINITY,
                        depth: f64::INFINITY,
                    });
                }
            }
            EntryExit::FromCusp { exit } => {
                if exit > EPS {
                    out.push(ExcursionRecord {
                        horoball: id,
                        entry: f64::NEG_INFINITY,
                        exit,
                        excursion: f64::INFINITY,
                        depth: f64::INFINITY,
                    });
                }
            }
            EntryExit::Miss | EntryExit::Tangent { .. } => {}
        }
    }
    out.sort_by(|a, b| a.entry.total_cmp(&b.entry).then(a.horoball.cmp(&b.horoball)));
    Ok(out)
}

/// The geodesic from `x` through `y`, with `y` reached at time `d(x, y)`.
pub fn geodesic_through(x: C64, y: C64) -> Result<Geodesic> {
    let dx = y.re - x.re;
    let end = if dx.abs() <= 1e-15 * (1.0 + x.re.abs()) {
        if y.im > x.im {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(x.re)
        }
    } else {
        let c = (y.norm_sqr() - x.norm_sqr()) / (2.0 * dx);
        let r = (x - C64::new(c, 0.0)).norm();
        ExtReal::Finite(if dx > 0.0 { c + r } else { c - r })
    };
    Geodesic::from(x, BoundaryPoint::Real(end))
}

/// Length of the projected path from `x` to `y`: the geodesic segment with
/// each horoball chord replaced by the horocyclic arc between its ends.
pub fn projected_path_length<F: HoroballFamily + ?Sized>(x: C64, y: C64, family: &F) -> Result<f64> {
    let len = distance(x, y);
    if len == 0.0 {
        return Ok(0.0);
    }
    let g = geodesic_through(x, y)?;
    let mut total = len;
    for (_, h) in family.candidates(&g, 0.0, len)? {
        if let EntryExit::Crossing { entry, exit } = entry_exit(&g, &h) {
            if exit <= 1e-12 || entry >= len - 1e-12 {
                continue;
            }
            if entry < -1e-9 || exit > len + 1e-9 {
                return Err(Error::Invalid("endpoints of a projected path must lie outside the horoballs"));
            }
            total += excursion_boundary(&g, &h)? - (exit - entry);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_everything_gives_distance() {
        let fam = HoroballList(alloc::vec![Horoball::AtInfinity { height: 10.0 }]);
        let (x, y) = (C64::new(0.0, 1.0), C64::new(1.0, 1.0));
        assert!((projected_path_length(x, y, &fam).unwrap() - distance(x, y)).abs() < 1e-12);
    }

    #[test]
    fn single_horoball_decomposition() {
        let h = Horoball::AtInfinity { height: 2.0 };
        let fam = HoroballList(alloc::vec![h]);
        let (x, y) = (C64::new(-3.0, 0.5), C64::new(3.0, 0.5));
        let g = geodesic_through(x, y).unwrap();
        let (t1, t2) = entry_exit(&g, &h).times().unwrap();
        let oracle = t1 + (distance(x, y) - t2) + excursion_boundary(&g, &h).unwrap();
        assert!((projected_path_length(x, y, &fam).unwrap() - oracle).abs() < 1e-9);
        assert!((g.point(distance(x, y)) - y).norm() < 1e-9);
    }

    #[test]
    fn trace_before_first_entry_is_empty() {
        let g = Geodesic::from(C64::new(0.0, 0.5), BoundaryPoint::Real(ExtReal::Infinity)).unwrap();
        let fam = HoroballList(alloc::vec![Horoball::AtInfinity { height: 2.0 }]);
        assert!(excursion_trace(&g, &fam, 1.0).unwrap().is_empty());
        let r = excursion_trace(&g, &fam, 2.0).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].never_exits());
        assert!((r[0].entry - 4f64.ln()).abs() < 1e-12);
    }
}
