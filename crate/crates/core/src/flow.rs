//! Lebesgue sampling of geodesics and statistics along them.
//!
//! Modular geodesics run from `i` to a uniform `r ∈ (0,1)`. Their passages
//! through Ford circles are read off the continued fraction of `r` (see
//! [`ModularTrajectory`]), so excursion times, depths and ψ integrals are
//! exact up to floating point, and the word and relative proxies are exact
//! integers.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, TAU};

use num_complex::Complex64 as C64;
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{
    nearest_lattice_point, ExcursionRecord, GroupElement, MetricBall, ModularLocator, RelLength, RelativeBall,
};
use crate::hyperbolic::{BoundaryPoint, ExtReal, Geodesic};
use crate::modular::{cf_expand, exact_lengths, ModularLevel, ModularTrajectory, UniformReal, LOOKAHEAD};
use crate::stats;

/// Sampling step for the ψ cross-check.
pub const PSI_STEP: f64 = 0.01;
/// Default `A` in `⌊x⌋_A = x·[x ≥ A]`.
pub const FLOOR_A: f64 = 10.0;
/// Mean geodesic time per continued-fraction coefficient, `π²/(6 ln 2)`.
pub const TIME_PER_COEFFICIENT: f64 = 2.373_138_220_831_458;

/// Uniform `r ∈ (0,1)`, as a point on the real line.
pub fn sample_boundary(seed: u64) -> BoundaryPoint {
    let r = UniformReal::new(seed).to_f64();
    // 0 has probability 2⁻⁵³; move it off the cusp
    let r = if r == 0.0 { f64::MIN_POSITIVE } else { r };
    BoundaryPoint::Real(ExtReal::Finite(r))
}

/// Uniform angle on the circle.
pub fn sample_angle(seed: u64) -> BoundaryPoint {
    BoundaryPoint::Angle(TAU * UniformReal::new(seed).to_f64())
}

/// `x` if `x ≥ a`, else 0.
pub fn floor_a(x: f64, a: f64) -> f64 {
    if x >= a {
        x
    } else {
        0.0
    }
}

/// Where the coefficients of the endpoint come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Endpoint {
    /// The seeded uniform real, expanded exactly.
    Seeded(u64),
    /// A double; only coefficients the Gauss map certifies are used.
    Real(f64),
}

impl Endpoint {
    pub fn approx(&self) -> f64 {
        match self {
            Endpoint::Seeded(s) => UniformReal::new(*s).to_f64(),
            Endpoint::Real(r) => *r,
        }
    }

    /// The first `n` coefficients, or fewer if a double runs out.
    pub fn coefficients(&self, n: usize) -> Vec<u64> {
        match self {
            Endpoint::Seeded(s) => UniformReal::new(*s).cf(n).coeffs,
            Endpoint::Real(r) => cf_expand(*r, n).cf.coeffs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Checkpoints {
    /// After this many coefficients.
    Coefficients(Vec<usize>),
    /// At these geodesic times.
    Times(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub coefficients: usize,
    pub time: f64,
    /// `Σ_{i ≤ n} a_i`.
    pub word_proxy: u128,
    /// `n`.
    pub rel_proxy: u64,
    /// Time average of ψ over `[0, time]`.
    pub psi_average: f64,
    pub max_depth: f64,
}

impl Checkpoint {
    /// `word_proxy / rel_proxy`, undefined before the first coefficient.
    pub fn rho(&self) -> Option<f64> {
        (self.rel_proxy > 0).then(|| self.word_proxy as f64 / self.rel_proxy as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub endpoint: Endpoint,
    pub r: f64,
    /// Time horizon covered by `levels`.
    pub horizon: f64,
    pub checkpoints: Vec<Checkpoint>,
    /// Ford-circle passages inside `[0, horizon]`.
    pub excursions: Vec<ExcursionRecord>,
    /// Passages with apex times, the raw material for the statistics above.
    pub levels: Vec<ModularLevel>,
}

/// Runs the modular geodesic from `i` to `r` until time `t` and until every
/// checkpoint is covered.
pub fn run_geodesic(r: Endpoint, t: f64, checkpoints: &Checkpoints) -> Result<TrajectorySummary> {
    let need_n = match checkpoints {
        Checkpoints::Coefficients(ns) => ns.iter().copied().max().unwrap_or(0),
        Checkpoints::Times(_) => 0,
    };
    let need_t = match checkpoints {
        Checkpoints::Times(ts) => ts.iter().copied().fold(t, f64::max),
        Checkpoints::Coefficients(_) => t,
    };
    if !(need_t >= 0.0) {
        return Err(Error::Invalid("time horizon must be nonnegative"));
    }
    let mut n = need_n.max((1.1 * need_t / TIME_PER_COEFFICIENT) as usize + 8);
    let (coeffs, levels) = loop {
        let coeffs = r.coefficients(n + LOOKAHEAD);
        let levels = match r {
            Endpoint::Seeded(_) => ModularTrajectory::new(&coeffs, n)?.levels,
            Endpoint::Real(_) => {
                if coeffs.len() < need_n + 1 {
                    return Err(Error::Invalid("the double does not determine enough coefficients"));
                }
                // golden padding stands in for the unknown tail
                let have = coeffs.len();
                let mut padded = coeffs.clone();
                padded.resize(have + LOOKAHEAD, 1);
                ModularTrajectory::new(&padded, have)?.levels
            }
        };
        let covered = levels.last().map_or(0.0, |l| l.apex);
        if covered >= need_t || matches!(r, Endpoint::Real(_)) {
            break (coeffs, levels);
        }
        n *= 2;
    };
    let horizon = need_t;
    let excursions: Vec<ExcursionRecord> = ModularTrajectory { levels: levels.clone() }
        .excursions(1.0)
        .into_iter()
        .map(|c| c.record)
        .filter(|e| e.entry < horizon)
        .collect();
    let mut prefix = vec![0u128; coeffs.len() + 1];
    for (i, a) in coeffs.iter().enumerate() {
        prefix[i + 1] = prefix[i] + *a as u128;
    }
    let at = |n: usize, time: f64| Checkpoint {
        coefficients: n,
        time,
        word_proxy: prefix[n],
        rel_proxy: n as u64,
        psi_average: psi_average(&levels, time),
        max_depth: max_depth(&levels, time),
    };
    let checkpoints = match checkpoints {
        Checkpoints::Coefficients(ns) => ns
            .iter()
            .map(|&n| {
                if n > levels.len() {
                    return Err(Error::Invalid("checkpoint beyond the computed coefficients"));
                }
                let time = if n == 0 { 0.0 } else { levels[n - 1].apex.max(0.0) };
                Ok(at(n, time))
            })
            .collect::<Result<Vec<_>>>()?,
        Checkpoints::Times(ts) => ts
            .iter()
            .map(|&time| {
                let n = levels.iter().take_while(|l| l.apex <= time).count();
                at(n, time)
            })
            .collect(),
    };
    Ok(TrajectorySummary { endpoint: r, r: r.approx(), horizon, checkpoints, excursions, levels })
}

/// `ψ(d) = Σ_{n ≥ 1, 2ⁿ ≤ e^d} 2ⁿ` for a depth `d` past the Ford family.
pub fn psi_value(d: f64) -> f64 {
    if !(d >= LN_2 * (1.0 - 1e-12)) {
        return 0.0;
    }
    let n = (d / LN_2 + 1e-12).floor();
    2f64.powf(n + 1.0) - 2.0
}

/// `∫ ψ(depth)` over the part of one passage lying in `[t0, t1]`.
pub fn psi_integral(level: &ModularLevel, t0: f64, t1: f64) -> f64 {
    let mut total = 0.0;
    let mut m = 2.0;
    while m <= level.radius {
        // depth ≥ ln m exactly while |s| ≤ acosh(R/m)
        let w = (level.radius / m).acosh();
        let lo = (level.apex - w).max(t0);
        let hi = (level.apex + w).min(t1);
        if hi > lo {
            total += m * (hi - lo);
        }
        m *= 2.0;
    }
    total
}

/// `∫₀ᵀ ψ` along the trajectory, summed passage by passage.
pub fn psi_total(levels: &[ModularLevel], t: f64) -> f64 {
    levels.iter().map(|l| psi_integral(l, 0.0, t)).sum()
}

/// `(1/T)·∫₀ᵀ ψ`, or 0 when `T = 0`.
pub fn psi_average(levels: &[ModularLevel], t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    psi_total(levels, t) / t
}

/// Depth past the Ford family at time `s`; 0 in the thick part.
pub fn depth_at(levels: &[ModularLevel], s: f64) -> f64 {
    // passages are disjoint, so at most one is active
    let k = levels.partition_point(|l| l.apex < s);
    let mut d = 0.0f64;
    for l in levels[k.saturating_sub(1)..(k + 1).min(levels.len())].iter() {
        if l.radius > 1.0 {
            d = d.max(l.depth_at(s - l.apex, 1.0));
        }
    }
    d
}

/// Riemann sum `(1/T)·Σ ψ(depth)·Δt` at midpoints; cross-checks [`psi_average`].
pub fn psi_average_sampled(levels: &[ModularLevel], t: f64, dt: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let steps = (t / dt).ceil() as usize;
    let h = t / steps as f64;
    (0..steps).map(|i| psi_value(depth_at(levels, (i as f64 + 0.5) * h)) * h).sum::<f64>() / t
}

/// Deepest penetration past the Ford family during `[0, T]`.
pub fn max_depth(levels: &[ModularLevel], t: f64) -> f64 {
    let mut best = 0.0f64;
    for l in levels {
        if l.radius <= 1.0 || l.apex - l.half_width(1.0) > t {
            continue;
        }
        let s = if l.apex < 0.0 {
            0.0
        } else if l.apex > t {
            t
        } else {
            l.apex
        };
        best = best.max(l.depth_at(s - l.apex, 1.0));
    }
    best
}

/// `(1/n)·Σ_{i ≤ n} a_i`.
pub fn khinchin_average(coeffs: &[u64], n: usize) -> Result<f64> {
    if n == 0 || coeffs.len() < n {
        return Err(Error::Invalid("need at least n ≥ 1 coefficients"));
    }
    let s: u128 = coeffs[..n].iter().map(|&a| a as u128).sum();
    Ok(s as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub coefficients: usize,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub count: usize,
}

/// Per-checkpoint quantiles of `ρ = Σa_i / n` over the seeds.
pub fn lebesgue_ratio_table(seeds: &[u64], checkpoints: &[usize]) -> Result<Vec<RatioRow>> {
    let nmax = checkpoints.iter().copied().max().unwrap_or(0);
    let rows: Vec<Vec<f64>> = seeds
        .iter()
        .map(|&s| {
            let c = UniformReal::new(s).cf(nmax).coeffs;
            checkpoints.iter().map(|&n| khinchin_average(&c, n)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(ratio_rows(&rows, checkpoints))
}

/// Quantile rows from a seed × checkpoint matrix of ρ values.
pub fn ratio_rows(rows: &[Vec<f64>], checkpoints: &[usize]) -> Vec<RatioRow> {
    checkpoints
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            RatioRow {
                coefficients: n,
                median: stats::median(&col),
                q25: stats::quantile(&col, 0.25),
                q75: stats::quantile(&col, 0.75),
                count: col.len(),
            }
        })
        .collect()
}

/// A checkpoint of a geodesic in a general presentation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralCheckpoint {
    pub time: f64,
    /// `None` when the nearest orbit point could not be certified.
    pub word: Option<u32>,
    pub rel: Option<RelLength>,
}

/// Word and relative lengths of the nearest orbit point to `γ_t`, found by
/// scanning `ball` out to `search_radius`. Exhaustion at a checkpoint leaves
/// that checkpoint empty instead of failing the run.
pub fn run_geodesic_general<E: GroupElement>(
    ball: &MetricBall<E>,
    rel: &RelativeBall,
    x0: C64,
    g: &Geodesic,
    times: &[f64],
    search_radius: u32,
) -> Result<Vec<GeneralCheckpoint>> {
    times
        .iter()
        .map(|&t| match nearest_lattice_point(ball, x0, g.point(t), search_radius) {
            Ok((h, _)) => Ok(GeneralCheckpoint {
                time: t,
                word: ball.word_length(&h).exact(),
                rel: Some(rel.rel_length(ball, &h)),
            }),
            Err(Error::SearchExhausted(_)) => Ok(GeneralCheckpoint { time: t, word: None, rel: None }),
            Err(e) => Err(e),
        })
        .collect()
}

/// Word length of the nearest orbit point, and the floored excursions
/// completed so far, at one time along a modular geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WordSample {
    pub time: f64,
    pub word: u64,
    pub rel: u64,
    /// `Σ ⌊E⌋_A` over passages that have exited by `time`.
    pub floored_excursions: f64,
}

/// Samples `d_G(1, h_t)` on the grid `0, dt, …, T` along the modular
/// geodesic from `i` to the seeded endpoint, `h_t` nearest to `γ_t` among
/// orbit points of `x0`.
///
/// Points are handled in double precision, so keep `T` below about 20.
pub fn word_metric_profile(seed: u64, t: f64, dt: f64, x0: C64, a: f64) -> Result<Vec<WordSample>> {
    let r = UniformReal::new(seed).cf(64).value();
    let g = Geodesic::from(C64::new(0.0, 1.0), BoundaryPoint::Real(ExtReal::Finite(r)))?;
    let summary = run_geodesic(Endpoint::Seeded(seed), t, &Checkpoints::Times(Vec::new()))?;
    let locator = ModularLocator::new(x0);
    let steps = (t / dt).round() as usize;
    (0..=steps)
        .map(|i| {
            let s = i as f64 * dt;
            let (h, _) = locator.nearest(g.point(s))?;
            let l = exact_lengths(h.a as i128, h.b as i128, h.c as i128, h.d as i128)?;
            let floored = summary.excursions.iter().filter(|e| e.exit <= s).map(|e| floor_a(e.excursion, a)).sum();
            Ok(WordSample { time: s, word: l.word, rel: l.rel, floored_excursions: floored })
        })
        .collect()
}

/// Largest backtrack `max_{s<t} (|h_s| − |h_t|)`, the additive constant in
/// coarse monotonicity with multiplicative constant 1.
pub fn max_backtrack(samples: &[WordSample]) -> i64 {
    let mut peak = i64::MIN;
    let mut worst = 0i64;
    for s in samples {
        let w = s.word as i64;
        if peak != i64::MIN {
            worst = worst.max(peak - w);
        }
        peak = peak.max(w);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        assert_eq!(psi_value(0.0), 0.0);
        assert_eq!(psi_value(2f64.ln()), 2.0);
        assert_eq!(psi_value(5f64.ln()), 6.0);
        assert_eq!(psi_value(8f64.ln()), 14.0);
    }

    #[test]
    fn proxies_for_two_sevenths() {
        let s = run_geodesic(Endpoint::Real(2.0 / 7.0 + 1e-9), 0.0, &Checkpoints::Coefficients(vec![1, 2])).unwrap();
        let p: Vec<_> = s.checkpoints.iter().map(|c| (c.word_proxy, c.rel_proxy)).collect();
        assert_eq!(p, vec![(3, 1), (5, 2)]);
    }

    #[test]
    fn zero_horizon_is_empty() {
        let s = run_geodesic(Endpoint::Seeded(3), 0.0, &Checkpoints::Times(vec![0.0])).unwrap();
        assert!(s.excursions.is_empty());
        assert_eq!(s.checkpoints[0].psi_average, 0.0);
    }

    #[test]
    fn khinchin_examples() {
        assert_eq!(khinchin_average(&[1; 50], 50).unwrap(), 1.0);
        let c = cf_expand(2f64.sqrt() - 1.0, 20).cf.coeffs;
        assert_eq!(khinchin_average(&c, 20).unwrap(), 2.0);
    }

    #[test]
    fn single_passage_integral_matches_sum_over_scales() {
        // R = 2^N: ∫ψ = Σ_{n ≤ N} 2ⁿ·2·acosh(2^{N−n})
        let l = ModularLevel { index: 0, coefficient: 64, radius: 64.0, apex: 50.0 };
        let direct: f64 = (1..=6).map(|n| 2f64.powi(n) * 2.0 * (64.0 / 2f64.powi(n)).acosh()).sum();
        assert!((psi_integral(&l, 0.0, 100.0) - direct).abs() < 1e-9);
        let sampled = psi_average_sampled(&[l], 100.0, 1e-3) * 100.0;
        assert!((sampled - direct).abs() / direct < 1e-2);
    }

    #[test]
    fn backtrack_of_monotone_profile_is_zero() {
        let s = |w| WordSample { time: 0.0, word: w, rel: 0, floored_excursions: 0.0 };
        assert_eq!(max_backtrack(&[s(0), s(1), s(1), s(3)]), 0);
        assert_eq!(max_backtrack(&[s(0), s(4), s(1), s(5)]), 3);
    }
}
