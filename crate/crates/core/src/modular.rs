//! The modular group PSL(2,ℤ): continued fractions, cutting sequences,
//! convergents, Ford circles and exact word/relative lengths.
//!
//! Geodesics start at `i` and end at `r ∈ (0, 1)`. Their cutting sequence
//! through the Farey tessellation begins with a run of right turns.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use hashbrown::HashMap;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ExcursionRecord, HoroballId};
use crate::hyperbolic::{distance, Horoball};
use crate::seed;
use num_complex::Complex64 as C64;

/// `a₀ + 1/(a₁ + 1/(a₂ + ⋯))`, truncated to the stored coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContinuedFraction {
    pub a0: i64,
    pub coeffs: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(a0: i64, coeffs: Vec<u64>) -> ContinuedFraction {
        ContinuedFraction { a0, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Value of the truncation, evaluated from the tail.
    pub fn value(&self) -> f64 {
        let mut x = 0.0f64;
        for &a in self.coeffs.iter().rev() {
            x = 1.0 / (a as f64 + x);
        }
        self.a0 as f64 + x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// The remainder became exactly zero: the input is rational.
    Exact,
    /// The floating remainder is below its accumulated rounding error.
    PrecisionExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfExpansion {
    pub cf: ContinuedFraction,
    /// Set when fewer coefficients than requested could be produced.
    pub terminated: Option<Termination>,
}

/// Regular continued fraction of a double by the Gauss map `x ↦ {1/x}`.
///
/// A double is rational, so the expansion stops as soon as the remainder is
/// indistinguishable from zero; about twenty coefficients survive for a
/// typical input. Use [`UniformReal`] or [`cf_expand_rational`] for more.
pub fn cf_expand(r: f64, n: usize) -> CfExpansion {
    let a0 = r.floor();
    let mut x = r - a0;
    let mut err = f64::EPSILON * r.abs().max(1.0);
    let mut coeffs = Vec::with_capacity(n);
    let mut terminated = None;
    while coeffs.len() < n {
        if x == 0.0 {
            terminated = Some(Termination::Exact);
            break;
        }
        if x <= err {
            terminated = Some(Termination::PrecisionExhausted);
            break;
        }
        let y = 1.0 / x;
        err = err / (x * x) + f64::EPSILON * y;
        let a = y.floor();
        coeffs.push(a as u64);
        x = y - a;
    }
    CfExpansion { cf: ContinuedFraction::new(a0 as i64, coeffs), terminated }
}

/// Exact continued fraction of `p/q`, `q > 0`, up to `n` coefficients.
pub fn cf_expand_rational(p: i64, q: i64, n: usize) -> CfExpansion {
    assert!(q > 0, "denominator must be positive");
    let a0 = p.div_euclid(q);
    let (mut num, mut den) = (q as i128, p.rem_euclid(q) as i128);
    let mut coeffs = Vec::new();
    while coeffs.len() < n && den != 0 {
        coeffs.push((num / den) as u64);
        let r = num % den;
        num = den;
        den = r;
    }
    let terminated = if coeffs.len() < n { Some(Termination::Exact) } else { None };
    CfExpansion { cf: ContinuedFraction::new(a0, coeffs), terminated }
}

/// A uniform random real in (0, 1) drawn from a seeded bit stream.
///
/// Only as many bits as needed are materialised: `cf(n)` reads enough of the
/// stream to pin the first `n` coefficients exactly, so the expansion never
/// suffers floating-point corruption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformReal {
    pub seed: u64,
}

impl UniformReal {
    pub fn new(seed: u64) -> UniformReal {
        UniformReal { seed }
    }

    fn words(&self, count: usize) -> Vec<u64> {
        let mut rng = seed::rng(self.seed);
        (0..count).map(|_| rng.next_u64()).collect()
    }

    /// The first 53 bits as a double in [0, 1).
    pub fn to_f64(&self) -> f64 {
        (self.words(1)[0] >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// The first `n` continued-fraction coefficients, exact.
    pub fn cf(&self, n: usize) -> ContinuedFraction {
        let mut words = 2 + (7 * n / 2 + 128) / 64;
        loop {
            if let Some(c) = self.try_cf(n, words) {
                return ContinuedFraction::new(0, c);
            }
            words *= 2;
        }
    }

    fn try_cf(&self, n: usize, words: usize) -> Option<Vec<u64>> {
        let w = self.words(words);
        // most significant word first
        let mut digits: Vec<u32> = Vec::with_capacity(2 * words);
        for x in w.iter().rev() {
            digits.push(*x as u32);
            digits.push((*x >> 32) as u32);
        }
        let m = BigUint::new(digits);
        let scale = BigUint::one() << (64 * words);
        // r ∈ [m/2^B, (m+1)/2^B); expand both ends while they agree
        let mut lo = (scale.clone(), m.clone());
        let mut hi = (scale, m + 1u32);
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            if lo.1.is_zero() || hi.1.is_zero() {
                return None;
            }
            let a_lo = quotient_step(&mut lo.0, &lo.1)?;
            let a_hi = quotient_step(&mut hi.0, &hi.1)?;
            if a_lo != a_hi || lo.0.is_zero() || hi.0.is_zero() {
                return None;
            }
            out.push(a_lo);
            core::mem::swap(&mut lo.0, &mut lo.1);
            core::mem::swap(&mut hi.0, &mut hi.1);
        }
        Some(out)
    }
}

/// Replaces `x` by `x mod y` and returns `⌊x/y⌋`. Small quotients, the
/// common case, are found by repeated subtraction without allocating.
fn quotient_step(x: &mut BigUint, y: &BigUint) -> Option<u64> {
    if x.bits() <= y.bits() + 3 {
        let mut q = 0u64;
        while &*x >= y {
            *x -= y;
            q += 1;
        }
        return Some(q);
    }
    let (q, r) = x.div_rem(y);
    *x = r;
    q.to_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Turn {
    L,
    R,
}

/// Run-length encoded turn sequence through the Farey dual tree.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CuttingSequence {
    pub runs: Vec<(Turn, u64)>,
}

pub fn cf_to_cutting(cf: &ContinuedFraction) -> CuttingSequence {
    let runs = cf
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, &a)| (if i % 2 == 0 { Turn::R } else { Turn::L }, a))
        .collect();
    CuttingSequence { runs }
}

pub fn cutting_to_cf(cs: &CuttingSequence) -> Result<ContinuedFraction> {
    let mut coeffs = Vec::with_capacity(cs.runs.len());
    for (i, &(turn, count)) in cs.runs.iter().enumerate() {
        let want = if i % 2 == 0 { Turn::R } else { Turn::L };
        if turn != want || count == 0 {
            return Err(Error::BadCutting);
        }
        coeffs.push(count);
    }
    Ok(ContinuedFraction::new(0, coeffs))
}

/// A reduced fraction `p/q` with `q > 0`, or `1/0` for ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rational {
    pub p: BigInt,
    pub q: BigInt,
}

impl Rational {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Rational {
        let (mut p, mut q) = (p.into(), q.into());
        if q.is_zero() {
            assert!(!p.is_zero(), "0/0 is not a point");
            return Rational { p: BigInt::one(), q };
        }
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        let g = p.gcd(&q);
        Rational { p: p / &g, q: q / g }
    }

    pub fn to_f64(&self) -> f64 {
        num_rational::BigRational::new(self.p.clone(), self.q.clone()).to_f64().unwrap_or(f64::NAN)
    }
}

/// Convergents `p_k/q_k` for k = 1..n (the k = 0 term `a₀/1` is omitted).
pub fn convergents(cf: &ContinuedFraction) -> Vec<Rational> {
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(cf.a0), BigInt::one());
    let mut out = Vec::with_capacity(cf.len());
    for &a in &cf.coeffs {
        let a = BigInt::from(a);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        out.push(Rational { p: p2.clone(), q: q2.clone() });
        p0 = core::mem::replace(&mut p1, p2);
        q0 = core::mem::replace(&mut q1, q2);
    }
    out
}

/// Σ aᵢ over the first `n` coefficients.
pub fn word_length_proxy(cf: &ContinuedFraction, n: usize) -> u128 {
    cf.coeffs.iter().take(n).map(|&a| a as u128).sum()
}

/// Number of coefficients in the prefix of length `n`.
pub fn rel_length_proxy(cf: &ContinuedFraction, n: usize) -> u64 {
    n.min(cf.len()) as u64
}

/// Ford circle at `p/q` with diameter `ρ/q²`; `q = 0` gives `{Im ≥ 1/ρ}`.
pub fn ford_circle_shrunk(pq: &Rational, rho: f64) -> Horoball {
    if pq.q.is_zero() {
        return Horoball::AtInfinity { height: 1.0 / rho };
    }
    let q = pq.q.to_f64().unwrap_or(f64::INFINITY);
    Horoball::Finite { base: pq.to_f64(), diameter: rho / (q * q) }
}

pub fn ford_circle(pq: &Rational) -> Horoball {
    ford_circle_shrunk(pq, 1.0)
}

/// `#{p/q reduced : 0 < p/q ≤ 1, q ≤ T} = Σ_{q≤T} φ(q)`.
pub fn farey_count(t: u64) -> u64 {
    let n = t as usize;
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            for j in (i..=n).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi.iter().skip(1).sum()
}

/// Gauss measure of `{x : ⌊1/x⌋ = k}`.
pub fn gauss_prob(k: u64) -> f64 {
    let k = k as f64;
    (1.0 / (k * (k + 2.0))).ln_1p() / core::f64::consts::LN_2
}

/// Complete quotients beyond the supplied prefix are approximated by
/// truncation; this many trailing coefficients are kept as a buffer.
pub const LOOKAHEAD: usize = 32;

/// Passage of the geodesic from `i` to `r` through the Ford circle at the
/// convergent `p_k/q_k`.
///
/// In the frame where that circle is `{Im ≥ 1}` the geodesic is a semicircle
/// of Euclidean radius `radius` whose apex is reached at time `apex`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModularLevel {
    pub index: usize,
    /// The coefficient a_{k+1} that governs this passage.
    pub coefficient: u64,
    pub radius: f64,
    pub apex: f64,
}

impl ModularLevel {
    /// Whether the geodesic enters the horoball `{Im ≥ h}` of this level.
    pub fn crosses(&self, h: f64) -> bool {
        self.radius > h
    }

    /// Half the time spent above height `h`.
    pub fn half_width(&self, h: f64) -> f64 {
        if self.radius <= h {
            0.0
        } else {
            (self.radius / h).acosh()
        }
    }

    /// Depth below `{Im ≥ h}` at signed time `s` from the apex.
    pub fn depth_at(&self, s: f64, h: f64) -> f64 {
        (self.radius / h).ln() - s.abs().cosh().ln()
    }
}

/// Apex times and radii of the Ford-circle passages of a modular geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularTrajectory {
    pub levels: Vec<ModularLevel>,
}

impl ModularTrajectory {
    /// Levels `0..n` from the coefficients of `r ∈ (0,1)`; needs
    /// `coeffs.len() ≥ n + LOOKAHEAD`.
    pub fn new(coeffs: &[u64], n: usize) -> Result<ModularTrajectory> {
        if coeffs.len() < n + LOOKAHEAD || coeffs.iter().any(|&a| a == 0) {
            return Err(Error::Invalid("need n + LOOKAHEAD positive coefficients"));
        }
        // forward endpoint in frame k is the complete quotient r_{k+1}
        let mut tail = vec![0.0f64; coeffs.len() + 1];
        let mut x = 0.0;
        for k in (0..coeffs.len()).rev() {
            x = coeffs[k] as f64 + if x == 0.0 { 0.0 } else { 1.0 / x };
            tail[k] = x;
        }
        let r = 1.0 / tail[0];
        let mut levels = Vec::with_capacity(n);
        // backward endpoint in frame k is −u_k, u_0 = r, u_{k+1} = 1/(a_{k+1} + u_k)
        let mut u = r;
        let apex_pt = |k: usize, u: f64| {
            let xp = tail[k];
            C64::new(0.5 * (xp - u), 0.5 * (xp + u))
        };
        // frame 0 is z ↦ 1/z̄, which fixes i
        let a0 = apex_pt(0, u);
        let mut tau = signed(C64::new(0.0, 1.0), a0);
        let mut prev = a0;
        for k in 0..n {
            levels.push(ModularLevel { index: k, coefficient: coeffs[k], radius: prev.im, apex: tau });
            let a = coeffs[k] as f64;
            u = 1.0 / (a + u);
            let next = apex_pt(k + 1, u);
            // frame k+1 → frame k is z ↦ a + 1/z̄
            let mapped = C64::new(a, 0.0) + next / next.norm_sqr();
            tau += signed(prev, mapped);
            prev = next;
        }
        Ok(ModularTrajectory { levels })
    }

    /// Passages that actually enter the Ford circle shrunk by `rho`.
    pub fn excursions(&self, rho: f64) -> Vec<CodedExcursion> {
        let h = 1.0 / rho;
        self.levels
            .iter()
            .filter(|l| l.crosses(h))
            .map(|l| {
                let w = l.half_width(h);
                CodedExcursion {
                    coefficient: l.coefficient,
                    record: ExcursionRecord {
                        horoball: HoroballId::Convergent(l.index as u64),
                        entry: (l.apex - w).max(0.0),
                        exit: l.apex + w,
                        excursion: 2.0 * (l.radius * l.radius - h * h).sqrt() / h,
                        depth: (l.radius / h).ln(),
                    },
                }
            })
            .collect()
    }
}

/// Signed distance from `from` to `to` on a geodesic traversed left to right.
fn signed(from: C64, to: C64) -> f64 {
    let d = distance(from, to);
    if to.re >= from.re {
        d
    } else {
        -d
    }
}

/// An excursion paired with the coefficient that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodedExcursion {
    pub coefficient: u64,
    pub record: ExcursionRecord,
}

/// Ford-circle excursions of the geodesic from `i` to `r`, paired with the
/// coefficient that produced each one. Tangent or missed circles produce no
/// record, so fewer than `n` records may come back.
///
/// Coefficients come from the double `r`, which limits `n` to roughly
/// twenty; use [`ModularTrajectory`] with exact coefficients beyond that.
pub fn excursions_from_cf(r: f64, n: usize) -> Result<Vec<CodedExcursion>> {
    let e = cf_expand(r, n + LOOKAHEAD);
    if e.cf.len() < n + 1 {
        return Err(Error::Invalid("not enough reliable coefficients in r"));
    }
    let mut coeffs = e.cf.coeffs;
    // pad with the golden tail so the buffer exists; only the last levels see it
    let have = coeffs.len();
    coeffs.resize(have.max(n + LOOKAHEAD), 1);
    Ok(ModularTrajectory::new(&coeffs, n.min(have - 1))?.excursions(1.0))
}

/// Exact lengths of an element of PSL(2,ℤ) for the generators {S, T, T⁻¹}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularLengths {
    /// Word length with S, T, T⁻¹ each of cost 1.
    pub word: u64,
    /// Length when every power of T costs 1.
    pub rel: u64,
}

type Frac = (i128, i128);

fn norm_frac(p: i128, q: i128) -> Frac {
    if q < 0 || (q == 0 && p < 0) {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// Stern–Brocot ancestors of x, with ∞ and the bracketing integers.
fn ladder(x: Frac, out: &mut Vec<Frac>) {
    let (p, q) = x;
    out.push((1, 0));
    if q == 0 {
        return;
    }
    let f = p.div_euclid(q);
    let (mut lo, mut hi) = ((f, 1), (f + 1, 1));
    out.push(lo);
    out.push(hi);
    loop {
        if lo.0 * q == p * lo.1 || hi.0 * q == p * hi.1 {
            break;
        }
        let m = (lo.0 + hi.0, lo.1 + hi.1);
        out.push(m);
        if m.0 * q == p * m.1 {
            break;
        }
        if p * m.1 < m.0 * q {
            hi = m;
        } else {
            lo = m;
        }
    }
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Position of the Farey neighbour `w` in the fan around `u`.
fn fan_index(u: Frac, w: Frac) -> Result<i128> {
    let (p, q) = u;
    let (g, x, y) = egcd(p, q);
    let (s, r) = (x * g, -y * g);
    let den = p.checked_mul(w.1).and_then(|a| q.checked_mul(w.0).map(|b| a - b)).ok_or(Error::Overflow)?;
    let num = s.checked_mul(w.0).and_then(|a| r.checked_mul(w.1).map(|b| a - b)).ok_or(Error::Overflow)?;
    Ok(num * den)
}

/// Word and relative length of `[[a, b], [c, d]]` in PSL(2,ℤ).
///
/// The group acts simply transitively on oriented Farey edges, with the
/// identity at (∞, 0), S flipping an edge and T^k rotating it k steps about
/// its tail. A shortest path from (∞, 0) to (a/c, b/d) stays on the
/// Stern–Brocot ladders of the two endpoints and of 0, so Dijkstra on that
/// finite set of edges is exact.
pub fn exact_lengths(a: i128, b: i128, c: i128, d: i128) -> Result<ModularLengths> {
    if a.checked_mul(d).zip(b.checked_mul(c)).map(|(x, y)| x - y) != Some(1) {
        return Err(Error::NotUnimodular((a as f64) * (d as f64) - (b as f64) * (c as f64)));
    }
    if [a, b, c, d].iter().any(|x| x.unsigned_abs() > (1u128 << 60)) {
        return Err(Error::Overflow);
    }
    let x = norm_frac(a, c);
    let y = norm_frac(b, d);
    let mut verts = Vec::new();
    ladder(x, &mut verts);
    ladder(y, &mut verts);
    ladder((0, 1), &mut verts);
    verts.sort_unstable();
    verts.dedup();
    let nv = verts.len();
    let index: HashMap<Frac, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut nbr: Vec<Vec<(usize, i128)>> = vec![Vec::new(); nv];
    for i in 0..nv {
        for j in 0..nv {
            let (u, w) = (verts[i], verts[j]);
            if (u.0 * w.1 - u.1 * w.0).abs() == 1 {
                nbr[i].push((j, fan_index(u, w)?));
            }
        }
    }
    let start = (index[&(1, 0)], index[&(0, 1)]);
    let target = (index[&x], index[&y]);
    let run = |relative: bool| -> u64 {
        let mut dist: HashMap<(usize, usize), u64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert(start, 0);
        heap.push(Reverse((0u64, start)));
        while let Some(Reverse((dd, (u, w)))) = heap.pop() {
            if dist.get(&(u, w)) != Some(&dd) {
                continue;
            }
            if (u, w) == target {
                return dd;
            }
            let mut relax = |st: (usize, usize), cost: u64| {
                let nd = dd + cost;
                if dist.get(&st).map_or(true, |&old| nd < old) {
                    dist.insert(st, nd);
                    heap.push(Reverse((nd, st)));
                }
            };
            relax((w, u), 1);
            let iw = nbr[u].iter().find(|(j, _)| *j == w).map(|(_, k)| *k).unwrap_or(0);
            for &(w2, k) in &nbr[u] {
                if w2 != w {
                    let cost = if relative { 1 } else { (k - iw).unsigned_abs() as u64 };
                    relax((u, w2), cost);
                }
            }
        }
        u64::MAX
    };
    Ok(ModularLengths { word: run(false), rel: run(true) })
}

/// [`exact_lengths`] for arbitrary-precision entries.
pub fn exact_lengths_big(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<ModularLengths> {
    let f = |x: &BigInt| x.to_i128().ok_or(Error::Overflow);
    exact_lengths(f(a)?, f(b)?, f(c)?, f(d)?)
}
