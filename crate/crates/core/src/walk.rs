//! Random walks on groups of isometries.
//!
//! Steps are drawn from a finitely supported distribution and multiplied on
//! the right, `w_{k+1} = w_k·g_{k+1}`. For integer presentations the
//! locations are kept as [`Mat2<BigInt>`], and every geometric quantity
//! along the path (boundary images, distances to the limit geodesic) is
//! computed from the exact entries, so paths of thousands of steps are fine.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;

use hashbrown::HashSet;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_traits::{Float, Signed, ToPrimitive, Zero};
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, Mat2, MetricBall, RelativeBall};
use crate::hyperbolic::{wrap_angle, ExtReal, Geodesic, BoundaryPoint};
use crate::modular::exact_lengths_big;
use crate::seed;
use crate::stats::{self, MeanCi};

/// Products of at most this many steps are searched for hyperbolic pairs.
const ELEMENTARY_DEPTH: usize = 4;
const ELEMENTARY_CAP: usize = 4096;

/// A finitely supported probability measure on a group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepDistribution<E> {
    support: Vec<E>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl<E: GroupElement> StepDistribution<E> {
    /// Checks the weights and that the support generates a non-elementary
    /// group.
    pub fn new(support: Vec<E>, probs: Vec<f64>) -> Result<StepDistribution<E>> {
        let d = StepDistribution::degenerate(support, probs)?;
        if !is_non_elementary(&d.support) {
            return Err(Error::Distribution(String::from(
                "support generates an elementary group (no two hyperbolic elements with distinct fixed points)",
            )));
        }
        Ok(d)
    }

    pub fn uniform(support: Vec<E>) -> Result<StepDistribution<E>> {
        let n = support.len();
        StepDistribution::new(support, vec![1.0 / n as f64; n])
    }

    /// Checks only the weights. For deterministic and other elementary
    /// control walks.
    pub fn degenerate(support: Vec<E>, probs: Vec<f64>) -> Result<StepDistribution<E>> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(Error::Distribution(String::from("support and weights must be nonempty and equally long")));
        }
        if probs.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::Distribution(String::from("weights must be positive")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Distribution(format!("weights sum to {total}, not 1")));
        }
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(StepDistribution { support, probs, cumulative })
    }

    /// Mixes in `g^{±k}`, `k ≥ 1`, with total weight `weight` and
    /// `P(k) ∝ rho^k`. Powers are truncated once `rho^k < 10⁻¹⁷`.
    pub fn with_heavy_tail(&self, g: &E, weight: f64, rho: f64) -> Result<StepDistribution<E>> {
        if !(weight > 0.0 && weight < 1.0 && rho > 0.0 && rho < 1.0) {
            return Err(Error::Distribution(String::from("need 0 < weight < 1 and 0 < rho < 1")));
        }
        let kmax = (1e-17f64.ln() / rho.ln()).ceil() as usize;
        let mut support = self.support.clone();
        let mut probs: Vec<f64> = self.probs.iter().map(|p| p * (1.0 - weight)).collect();
        let (gi, mut pos) = (g.inverse(), E::identity());
        let mut neg = E::identity();
        for k in 1..=kmax {
            pos = pos.compose(g);
            neg = neg.compose(&gi);
            let p = 0.5 * weight * (1.0 - rho) * rho.powi(k as i32 - 1);
            support.push(pos.clone());
            probs.push(p);
            support.push(neg.clone());
            probs.push(p);
        }
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        StepDistribution::new(support, probs)
    }

    pub fn support(&self) -> &[E] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Index of a support element drawn with the stated weights.
    pub fn sample(&self, rng: &mut seed::Rng) -> usize {
        let u: f64 = rng.gen();
        let i = self.cumulative.partition_point(|&c| c <= u);
        i.min(self.support.len() - 1)
    }
}

impl StepDistribution<Mat2<BigInt>> {
    /// Uniform on {S, T, T⁻¹} in PSL(2,ℤ).
    pub fn modular_uniform() -> StepDistribution<Mat2<BigInt>> {
        let s = Mat2::new(0i64, -1, 1, 0).to_big();
        let t = Mat2::new(1i64, 1, 0, 1).to_big();
        StepDistribution::uniform(vec![s, t.clone(), t.inverse()]).expect("S, T generate PSL(2,ℤ)")
    }
}

fn same_point(x: ExtReal, y: ExtReal) -> bool {
    wrap_angle(x.to_angle() - y.to_angle()).abs() < 1e-9
}

/// Whether products of at most four support elements contain two
/// hyperbolic elements without a common fixed point.
pub fn is_non_elementary<E: GroupElement>(support: &[E]) -> bool {
    let mut seen: HashSet<E> = HashSet::new();
    let mut frontier = vec![E::identity()];
    let mut axes: Vec<(ExtReal, ExtReal)> = Vec::new();
    for _ in 0..ELEMENTARY_DEPTH {
        let mut next = Vec::new();
        for w in &frontier {
            for s in support {
                let g = w.compose(s);
                if seen.len() >= ELEMENTARY_CAP || !seen.insert(g.clone()) {
                    continue;
                }
                let m = g.to_mobius();
                if m.is_hyperbolic() {
                    if let Some((p, q)) = m.fixed_points() {
                        let disjoint = |(u, v): &(ExtReal, ExtReal)| {
                            !same_point(p, *u) && !same_point(p, *v) && !same_point(q, *u) && !same_point(q, *v)
                        };
                        if axes.iter().any(disjoint) {
                            return true;
                        }
                        axes.push((p, q));
                    }
                }
                next.push(g);
            }
        }
        frontier = next;
    }
    false
}

/// Steps and prefix products of one walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplePath<E> {
    pub seed: u64,
    /// Indices into the support of the step distribution.
    pub steps: Vec<usize>,
    /// `w_0 = 1, w_1, …, w_n`.
    pub locations: Vec<E>,
}

impl<E> SamplePath<E> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

pub fn sample_path<E: GroupElement>(mu: &StepDistribution<E>, n: usize, seed: u64) -> SamplePath<E> {
    let mut rng = seed::rng(seed);
    let mut steps = Vec::with_capacity(n);
    let mut locations = Vec::with_capacity(n + 1);
    locations.push(E::identity());
    for _ in 0..n {
        let i = mu.sample(&mut rng);
        let w = locations.last().expect("nonempty").compose(&mu.support[i]);
        steps.push(i);
        locations.push(w);
    }
    SamplePath { seed, steps, locations }
}

/// Word and relative lengths of one element, either possibly unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lengths {
    pub word: Option<u64>,
    pub rel: Option<u64>,
    /// The relative length may be too large (parabolic power cap).
    pub flagged: bool,
}

pub trait LengthOracle<E> {
    fn lengths(&self, g: &E) -> Lengths;
}

/// Exact lengths in PSL(2,ℤ) for {S, T, T⁻¹}, with no radius cap.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModularOracle;

impl LengthOracle<Mat2<BigInt>> for ModularOracle {
    fn lengths(&self, g: &Mat2<BigInt>) -> Lengths {
        match exact_lengths_big(&g.a, &g.b, &g.c, &g.d) {
            Ok(l) => Lengths { word: Some(l.word), rel: Some(l.rel), flagged: false },
            Err(_) => Lengths { word: None, rel: None, flagged: false },
        }
    }
}

/// Lengths read from an enumerated ball; elements outside it are unknown.
#[derive(Debug, Clone, Copy)]
pub struct BallOracle<'a, E> {
    pub ball: &'a MetricBall<E>,
    pub rel: &'a RelativeBall,
}

impl<E: GroupElement> LengthOracle<E> for BallOracle<'_, E> {
    fn lengths(&self, g: &E) -> Lengths {
        let word = self.ball.word_length(g).exact().map(u64::from);
        let r = self.rel.rel_length(self.ball, g);
        Lengths { word, rel: r.value.map(u64::from), flagged: r.possibly_overestimated }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftEstimate {
    pub step: usize,
    /// Mean, deviation and 95% interval of `d(1, w_n)/n` over the known values.
    pub estimate: MeanCi,
    /// Share of paths whose length was unknown (outside the cap).
    pub saturated: f64,
}

fn drift_with<E, O: LengthOracle<E>>(
    paths: &[SamplePath<E>],
    oracle: &O,
    n: usize,
    pick: impl Fn(Lengths) -> Option<u64>,
) -> Result<DriftEstimate> {
    if n == 0 || paths.iter().any(|p| p.len() < n) {
        return Err(Error::Invalid("drift needs n ≥ 1 and paths of length ≥ n"));
    }
    let vals: Vec<f64> =
        paths.iter().filter_map(|p| pick(oracle.lengths(&p.locations[n]))).map(|l| l as f64 / n as f64).collect();
    let saturated = 1.0 - vals.len() as f64 / paths.len() as f64;
    Ok(DriftEstimate { step: n, estimate: stats::mean_ci95(&vals), saturated })
}

/// `d_G(1, w_n)/n` across paths.
pub fn drift_word<E, O: LengthOracle<E>>(paths: &[SamplePath<E>], oracle: &O, n: usize) -> Result<DriftEstimate> {
    drift_with(paths, oracle, n, |l| l.word)
}

/// `d_rel(1, w_n)/n` across paths.
pub fn drift_rel<E, O: LengthOracle<E>>(paths: &[SamplePath<E>], oracle: &O, n: usize) -> Result<DriftEstimate> {
    drift_with(paths, oracle, n, |l| l.rel)
}

/// `d_G(1, w_k)/d_rel(1, w_k)` for each requested `k`; `None` where a
/// length is unknown or `w_k` is the identity.
pub fn ratio_along_walk<E, O: LengthOracle<E>>(path: &SamplePath<E>, oracle: &O, ks: &[usize]) -> Vec<Option<f64>> {
    ks.iter()
        .map(|&k| {
            let l = oracle.lengths(path.locations.get(k)?);
            match (l.word, l.rel) {
                (Some(w), Some(r)) if r > 0 => Some(w as f64 / r as f64),
                _ => None,
            }
        })
        .collect()
}

/// `ln |x|`, finite for any nonzero big integer.
pub fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::NAN).abs().ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * LN_2
}

/// `x / 2^s` as doubles for a shift `s` that keeps the largest near 2⁶⁰.
fn scaled(xs: &[&BigInt]) -> (Vec<f64>, i64) {
    let bits = xs.iter().map(|x| x.bits()).max().unwrap_or(0) as i64;
    let shift = (bits - 60).max(0);
    let v = xs
        .iter()
        .map(|x| {
            let m = if x.is_negative() { -((-(*x).clone()) >> shift as usize) } else { (*x).clone() >> shift as usize };
            m.to_f64().unwrap_or(f64::NAN)
        })
        .collect();
    (v, shift)
}

/// `p/q` as an extended real.
pub fn ratio(p: &BigInt, q: &BigInt) -> ExtReal {
    if q.is_zero() {
        return ExtReal::Infinity;
    }
    let (v, _) = scaled(&[p, q]);
    ExtReal::Finite(v[0] / v[1])
}

/// A double as an exact fraction.
pub fn dyadic(x: f64) -> (BigInt, BigInt) {
    let (m, e, s) = x.integer_decode();
    let m = BigInt::from(m) * BigInt::from(s);
    if e >= 0 {
        (m << e as usize, BigInt::from(1))
    } else {
        (m, BigInt::from(1) << (-e) as usize)
    }
}

/// `ln |u·z + v|²` for big integers `u, v` and a complex `z`.
fn ln_norm_sqr(u: &BigInt, v: &BigInt, z: C64) -> f64 {
    let (s, shift) = scaled(&[u, v]);
    (C64::new(s[0], 0.0) * z + s[1]).norm_sqr().ln() + 2.0 * shift as f64 * LN_2
}

/// `ln` of the chordal distance between projective points `(p1:q1)` and
/// `(p2:q2)` of the circle, through the Cayley map.
fn ln_chord(p1: &BigInt, q1: &BigInt, p2: &BigInt, q2: &BigInt) -> f64 {
    let det = p1 * q2 - p2 * q1;
    if det.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n1 = p1 * p1 + q1 * q1;
    let n2 = p2 * p2 + q2 * q2;
    LN_2 + ln_abs(&det) - 0.5 * (ln_abs(&n1) + ln_abs(&n2))
}

/// `w(0), w(1), w(∞)` as projective pairs.
fn images(w: &Mat2<BigInt>) -> [(BigInt, BigInt); 3] {
    [(w.b.clone(), w.d.clone()), (&w.a + &w.b, &w.c + &w.d), (w.a.clone(), w.c.clone())]
}

/// Limit point of a walk located by shadow bracketing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingPoint {
    /// First step from which every bracket is within tolerance.
    pub step: usize,
    /// Chordal diameter of the bracket at `step`.
    pub diameter: f64,
    /// `w_n(1)` for the last step `n`, as `(p, q)`.
    pub exact: (BigInt, BigInt),
    pub point: BoundaryPoint,
}

/// Brackets the limit point by the images `w_k(0), w_k(1), w_k(∞)`.
///
/// Converged at step `k` once, for every later step `m`, the bracket at `m`
/// has chordal diameter below `tol` and `w_m(1)` lies within `tol` of the
/// final `w_n(1)`.
pub fn hitting_point(path: &SamplePath<Mat2<BigInt>>, tol: f64) -> Result<HittingPoint> {
    let n = path.len();
    let ln_tol = tol.ln();
    let last = images(&path.locations[n]);
    let mut diam_at = vec![0.0; n + 1];
    let mut start = n + 1;
    for k in (0..=n).rev() {
        let im = images(&path.locations[k]);
        let d = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| ln_chord(&im[i].0, &im[i].1, &im[j].0, &im[j].1))
            .fold(f64::NEG_INFINITY, f64::max);
        let drift = ln_chord(&im[1].0, &im[1].1, &last[1].0, &last[1].1);
        if d < ln_tol && drift < ln_tol {
            start = k;
            diam_at[k] = d.exp();
        } else {
            break;
        }
    }
    if start > n {
        return Err(Error::NotConverged(n));
    }
    let (p, q) = last[1].clone();
    let point = BoundaryPoint::Real(ratio(&p, &q));
    Ok(HittingPoint { step: start, diameter: diam_at[start], exact: (p, q), point })
}

/// `d(w·x0, γ)` where `γ` is the geodesic ray from `x0` through `w·x0`-space
/// ending at `ξ = p/q`, with `η` its backward endpoint.
fn deviation(w: &Mat2<BigInt>, x0: C64, xi: &(BigInt, BigInt), eta: &(BigInt, BigInt)) -> f64 {
    let (p, q) = xi;
    // w⁻¹ξ = −B/A with A = aq − cp, B = bq − dp
    let big_a = &w.a * q - &w.c * p;
    let big_b = &w.b * q - &w.d * p;
    let u = ratio(&(-&big_b), &big_a);
    let (e1, e2) = eta;
    let v = ratio(&(&w.d * e1 - &w.b * e2), &(&w.a * e2 - &w.c * e1));
    let delta = distance_to_line(x0, u, v);
    // signed foot position along γ from the Busemann function at ξ
    let t_foot = delta.cosh().ln() + ln_norm_sqr(q, &(-p), x0) - ln_norm_sqr(&big_a, &big_b, x0);
    if t_foot >= 0.0 {
        delta
    } else {
        displacement(w, x0)
    }
}

/// `d(z, line(u, v))` for the geodesic with endpoints `u, v`.
pub fn distance_to_line(z: C64, u: ExtReal, v: ExtReal) -> f64 {
    let s = match (u, v) {
        (ExtReal::Finite(u), ExtReal::Finite(v)) => ((z.re - u) * (z.re - v) + z.im * z.im).abs() / (z.im * (u - v).abs()),
        (ExtReal::Finite(u), ExtReal::Infinity) | (ExtReal::Infinity, ExtReal::Finite(u)) => (z.re - u).abs() / z.im,
        (ExtReal::Infinity, ExtReal::Infinity) => f64::INFINITY,
    };
    s.asinh()
}

/// `d(x0, w·x0)` from exact entries.
pub fn displacement(w: &Mat2<BigInt>, x0: C64) -> f64 {
    // cosh d = 1 + |a x0 + b − c x0² − d x0|² / (2 y0²)
    let (s, shift) = scaled(&[&w.a, &w.b, &w.c, &w.d]);
    let num = (C64::new(s[0], 0.0) * x0 + s[1] - C64::new(s[2], 0.0) * x0 * x0 - C64::new(s[3], 0.0) * x0).norm_sqr();
    let ln_z = num.ln() + 2.0 * shift as f64 * LN_2 - (2.0 * x0.im * x0.im).ln();
    if ln_z > 40.0 {
        ln_z + LN_2
    } else {
        ln_z.exp().ln_1p().exp().acosh()
    }
}

/// `d(w_k·x0, γ)/k` for `k = 1..=n`, with `γ` the ray from `x0` to the
/// hitting point found at tolerance `tol`.
pub fn tracking_deviation(path: &SamplePath<Mat2<BigInt>>, x0: C64, tol: f64) -> Result<Vec<f64>> {
    let hp = hitting_point(path, tol)?;
    let eta = match Geodesic::from(x0, hp.point)?.backward_endpoint() {
        ExtReal::Finite(e) => dyadic(e),
        ExtReal::Infinity => (BigInt::from(1), BigInt::zero()),
    };
    Ok((1..=path.len()).map(|k| deviation(&path.locations[k], x0, &hp.exact, &eta) / k as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(a: i64, b: i64, c: i64, d: i64) -> Mat2<BigInt> {
        Mat2::new(a, b, c, d).to_big()
    }

    #[test]
    fn point_mass_on_t_gives_powers() {
        let t = big(1, 1, 0, 1);
        let mu = StepDistribution::degenerate(vec![t.clone()], vec![1.0]).unwrap();
        let p = sample_path(&mu, 7, 3);
        assert_eq!(p.locations[7], big(1, 7, 0, 1));
        assert_eq!(sample_path(&mu, 0, 3).locations, vec![Mat2::identity()]);
        assert!(StepDistribution::new(vec![t], vec![1.0]).is_err());
    }

    #[test]
    fn modular_support_is_non_elementary() {
        assert!(is_non_elementary(StepDistribution::modular_uniform().support()));
        let t = big(1, 1, 0, 1);
        assert!(!is_non_elementary(&[t.clone(), t.inverse()]));
        let g = big(2, 1, 1, 1);
        assert!(!is_non_elementary(&[g.clone(), g.inverse()]));
    }

    #[test]
    fn heavy_tail_weights_sum_to_one() {
        let mu = StepDistribution::modular_uniform();
        let t = big(1, 1, 0, 1);
        let h = mu.with_heavy_tail(&t, 0.3, 0.5).unwrap();
        assert!((h.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(h.support().contains(&big(1, 5, 0, 1)));
    }

    #[test]
    fn hyperbolic_point_mass_hits_attracting_point() {
        let g = big(2, 1, 1, 1);
        let mu = StepDistribution::degenerate(vec![g], vec![1.0]).unwrap();
        let p = sample_path(&mu, 40, 0);
        let hp = hitting_point(&p, 1e-6).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        match hp.point {
            BoundaryPoint::Real(ExtReal::Finite(x)) => assert!((x - phi).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        // the axis passes through its top point, so the orbit tracks exactly
        let x0 = C64::new(0.5, 5f64.sqrt() / 2.0);
        let dev = tracking_deviation(&p, x0, 1e-6).unwrap();
        assert!(dev[..30].iter().all(|&d| d < 1e-6), "{dev:?}");
    }

    #[test]
    fn line_distance_matches_geodesic() {
        let z = C64::new(0.3, 0.4);
        let g = Geodesic::from(C64::new(1.0, 2.0), BoundaryPoint::Real(ExtReal::Finite(5.0))).unwrap();
        let u = g.backward_endpoint();
        assert!((distance_to_line(z, u, ExtReal::Finite(5.0)) - g.distance_to_line(z)).abs() < 1e-12);
    }

    #[test]
    fn displacement_matches_float() {
        let w = big(7, 3, 2, 1);
        let x0 = C64::new(0.4, 0.9);
        let m = w.to_mobius();
        let direct = crate::hyperbolic::distance(x0, m.apply(x0));
        assert!((displacement(&w, x0) - direct).abs() < 1e-12);
    }
}
