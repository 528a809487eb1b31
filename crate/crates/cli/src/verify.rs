//! Re-evaluates the acceptance criteria from written outputs.
//!
//! Every predicate is recomputed from the CSV tables; the manifest supplies
//! only fitted constants (which the tables must then satisfy) and section
//! timings.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use cuspidal::modular::gauss_prob;
use cuspidal::stats::{mean_ci95, median, sample_sd};

use crate::error::{CliError, Result};
use crate::experiments::REGISTRY;
use crate::output::{Manifest, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "criterion {:>2}  {s}  {}: {}", self.id, self.title, self.detail)
    }
}

pub const TITLES: [&str; 16] = [
    "boundary derivative vs finite differences",
    "displacement identity",
    "Gauss statistics",
    "Khinchin divergence",
    "Lebesgue ratio divergence",
    "harmonic ratio stabilization",
    "drift positivity",
    "sublinear tracking",
    "flat-cylinder identities",
    "excursion-definition equivalence",
    "quadratic counting",
    "entry-point stability",
    "Lyapunov trend and control",
    "coarse monotonicity and excursion bound",
    "psi machinery",
    "reproducibility",
];

/// A decided predicate with a one-line account, or the reason the outputs
/// are not an acceptance-sized run.
pub enum Verdict {
    Decided(bool, String),
    NotApplicable(String),
}

use Verdict::{Decided, NotApplicable};

fn na(msg: impl Into<String>) -> Result<Verdict> {
    Ok(NotApplicable(msg.into()))
}

fn rows_where<'a>(t: &'a Table, col: &str, val: &str) -> Result<Vec<&'a Vec<String>>> {
    let j = t.col(col)?;
    Ok(t.rows.iter().filter(|r| r[j] == val).collect())
}

fn cell(t: &Table, row: &[String], col: &str) -> Result<Option<f64>> {
    let c = row[t.col(col)?].trim();
    if c.is_empty() {
        return Ok(None);
    }
    c.parse().map(Some).map_err(|_| CliError::MissingOutputs(format!("{}: bad number {c:?}", t.file)))
}

/// Values of `col` grouped by the text of `key`, in first-seen order.
fn grouped(t: &Table, key: &str, col: &str) -> Result<Vec<(String, Vec<f64>)>> {
    let (k, v) = (t.col(key)?, t.col(col)?);
    let mut out: Vec<(String, Vec<f64>)> = Vec::new();
    for r in &t.rows {
        let Ok(x) = r[v].parse::<f64>() else { continue };
        match out.iter_mut().find(|g| g.0 == r[k]) {
            Some(g) => g.1.push(x),
            None => out.push((r[k].clone(), vec![x])),
        }
    }
    Ok(out)
}

fn timing(m: &Manifest, section: &str, limit: f64) -> (bool, String) {
    match m.timings.get(section) {
        Some(&s) => (s < limit, format!("{s:.3} s (limit {limit} s)")),
        None => (false, format!("no timing for {section}")),
    }
}

/// A fitted constant, NaN when the run could not fit it (every predicate on NaN fails).
fn fitted(m: &Manifest, k: &str) -> f64 {
    m.fitted.get(k).copied().unwrap_or(f64::NAN)
}

fn c1_c2_identities(dir: &Path, m: &Manifest, kind: &str, tol: f64, limit: f64, section: &str) -> Result<Verdict> {
    let t = Table::read(dir, "identities.csv")?;
    let rows = rows_where(&t, "kind", kind)?;
    if rows.len() < 1000 {
        return na(format!("{} trials, acceptance needs 1000", rows.len()));
    }
    let mut worst = 0.0f64;
    for r in &rows {
        worst = worst.max(cell(&t, r, "error")?.unwrap_or(f64::INFINITY));
    }
    let (ok_t, tm) = timing(m, section, limit);
    Ok(Decided(
        worst < tol && ok_t,
        format!("max error {worst:.2e} (tol {tol:e}) over {} trials, {tm}", rows.len()),
    ))
}

fn c3(dir: &Path, m: &Manifest) -> Result<Verdict> {
    let t = Table::read(dir, "gauss.csv")?;
    let counts = t.reals("count")?;
    let n: f64 = counts.iter().flatten().sum();
    if n < 1e6 {
        return na(format!("{n} coefficients, acceptance needs 10^6"));
    }
    let ks = t.texts("k")?;
    let mut worst = 0.0f64;
    for k in 1..=5u64 {
        let j = ks.iter().position(|s| *s == k.to_string()).ok_or_else(|| CliError::MissingOutputs(format!("gauss.csv: no row k = {k}")))?;
        worst = worst.max((counts[j].unwrap_or(0.0) / n - gauss_prob(k)).abs());
    }
    let (ok_t, tm) = timing(m, "total", 30.0);
    Ok(Decided(worst <= 0.005 && ok_t, format!("max |freq − gauss_prob| {worst:.5} over {n} coefficients, {tm}")))
}

fn medians_by(t: &Table, key: &str, col: &str) -> Result<Vec<(f64, f64, usize)>> {
    grouped(t, key, col)?
        .into_iter()
        .map(|(k, v)| {
            let x: f64 = k.parse().map_err(|_| CliError::MissingOutputs(format!("{}: bad key {k:?}", t.file)))?;
            Ok((x, median(&v), v.len()))
        })
        .collect()
}

fn c4(dir: &Path, m: &Manifest) -> Result<Verdict> {
    let t = Table::read(dir, "khinchin.csv")?;
    let meds = medians_by(&t, "n", "average")?;
    let at = |n: f64| meds.iter().find(|x| x.0 == n).copied();
    let (ok_t, tm) = timing(m, "total", 60.0);
    match (at(100.0), at(10000.0)) {
        (Some(a), _) if a.2 < 200 => na(format!("{} seeds, acceptance needs 200", a.2)),
        (Some(a), Some(b)) => Ok(Decided(
            b.1 > a.1 && b.1 >= 1.5 * a.1 && ok_t,
            format!("median {:.3} at n=100, {:.3} at n=10^4 (factor {:.2}, need 1.5) over {} seeds, {tm}", a.1, b.1, b.1 / a.1, b.2),
        )),
        _ => na("needs checkpoints n = 100 and 10000"),
    }
}

fn lebesgue_medians(dir: &Path) -> Result<Vec<(f64, f64, usize)>> {
    let t = Table::read(dir, "lebesgue.csv")?;
    medians_by(&t, "n", "rho")
}

fn c5(dir: &Path) -> Result<Verdict> {
    let meds = lebesgue_medians(dir)?;
    let want = [100.0, 1000.0, 10000.0];
    let got: Vec<_> = want.iter().filter_map(|&n| meds.iter().find(|x| x.0 == n)).collect();
    if got.len() < 3 {
        return na("needs checkpoints n = 100, 1000, 10000");
    }
    if got[0].2 < 200 {
        return na(format!("{} seeds, acceptance needs 200", got[0].2));
    }
    let inc = got.windows(2).all(|w| w[1].1 > w[0].1);
    let s: Vec<String> = got.iter().map(|g| format!("{:.3}", g.1)).collect();
    Ok(Decided(inc, format!("median rho {} at n = 10^2, 10^3, 10^4 over {} seeds", s.join(" < "), got[0].2)))
}

fn walk_column(t: &Table, k: usize, col: &str) -> Result<Vec<f64>> {
    Ok(rows_where(t, "k", &k.to_string())?.iter().filter_map(|r| cell(t, r, col).ok().flatten()).collect())
}

fn c6(dir: &Path, m: &Manifest) -> Result<Verdict> {
    let t = Table::read(dir, "walk.csv")?;
    let (r10, r30) = (walk_column(&t, 10, "ratio")?, walk_column(&t, 30, "ratio")?);
    let paths = rows_where(&t, "k", "30")?.len();
    let leb = lebesgue_medians(dir)?.into_iter().find(|x| x.0 == 10000.0).map(|x| x.1);
    let Some(leb) = leb else { return na("needs the Lebesgue checkpoint n = 10^4") };
    if paths < 500 {
        return na(format!("{paths} paths, acceptance needs 500"));
    }
    let (sd10, sd30) = (sample_sd(&r10), sample_sd(&r30));
    let ci = mean_ci95(&r30);
    let (ok_t, tm) = timing(m, "walk", 600.0);
    let pass = sd30 < sd10 && ci.excludes(0.0) && ci.excludes(leb) && ok_t;
    Ok(Decided(
        pass,
        format!(
            "sd {sd10:.4} at k=10 vs {sd30:.4} at k=30 ({}), k=30 mean {:.4} CI [{:.4}, {:.4}] vs 0 and Lebesgue median {leb:.3}, {paths} paths, {tm}",
            if sd30 < sd10 { "decreasing" } else { "not decreasing" },
            ci.mean,
            ci.lo,
            ci.hi
        ),
    ))
}

fn c7(dir: &Path) -> Result<Verdict> {
    let t = Table::read(dir, "walk.csv")?;
    let k = t.reals("k")?.into_iter().flatten().fold(0.0, f64::max) as usize;
    let per = |col| -> Result<Vec<f64>> { Ok(walk_column(&t, k, col)?.into_iter().map(|x| x / k as f64).collect()) };
    let (w, r) = (mean_ci95(&per("word")?), mean_ci95(&per("rel")?));
    Ok(Decided(
        w.lo > 0.0 && r.lo > 0.0 && r.mean <= w.mean,
        format!(
            "at k={k}: word drift {:.4} [{:.4}, {:.4}], rel drift {:.4} [{:.4}, {:.4}]",
            w.mean, w.lo, w.hi, r.mean, r.lo, r.hi
        ),
    ))
}

fn c8(dir: &Path) -> Result<Verdict> {
    let t = Table::read(dir, "tracking.csv")?;
    let (a, b) = (walk_column(&t, 100, "deviation_over_k")?, walk_column(&t, 1000, "deviation_over_k")?);
    if a.len() < 100 || b.len() < 100 {
        return na(format!("only {} / {} paths with deviations at k = 100 / 1000", a.len(), b.len()));
    }
    let (ma, mb) = (median(&a), median(&b));
    Ok(Decided(mb < 0.5 * ma, format!("median d/k {ma:.5} at k=100, {mb:.5} at k=1000 (need < half) over {} paths", b.len())))
}

fn c9(dir: &Path, m: &Manifest) -> Result<Verdict> {
    let t = Table::read(dir, "cylinder.csv")?;
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for r in &t.rows {
        for col in ["length_residual_1", "length_residual_2", "twist_residual"] {
            if let Some(x) = cell(&t, r, col)? {
                worst = worst.max(x);
            }
        }
        if let Some(x) = cell(&t, r, "ratio")? {
            ratios.push(x);
        }
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let (ok_t, tm) = timing(m, "total", 1.0);
    Ok(Decided(
        worst < 1e-9 && !ratios.is_empty() && lo >= 0.1 && hi <= 10.0 && ok_t,
        format!("max residual {worst:.2e}, ratio in [{lo:.4}, {hi:.4}] over {} rows ({} compared), {tm}", t.rows.len(), ratios.len()),
    ))
}

fn c10(dir: &Path) -> Result<Verdict> {
    let t = Table::read(dir, "excursion_defs.csv")?;
    let b: Vec<f64> = t.reals("boundary")?.into_iter().flatten().collect();
    let d: Vec<f64> = t.reals("abs_diff")?.into_iter().flatten().collect();
    if b.len() < 1000 {
        return na(format!("{} configurations, acceptance needs 1000", b.len()));
    }
    let med = median(&b);
    let c = b.iter().zip(&d).filter(|(b, _)| **b <= med).map(|(_, d)| *d).fold(0.0, f64::max);
    let out = d.iter().filter(|&&x| x > c + 1e-6).count();
    let q: Vec<f64> = t.reals("boundary_over_visual")?.into_iter().flatten().collect();
    Ok(Decided(
        out == 0,
        format!(
            "C = {c:.4} fitted on E_b ≤ median; {out} of {} beyond C + 1e-6 (max diff {:.1}); E_b/E_v in [{:.3}, {:.3}]",
            d.len(),
            d.iter().copied().fold(0.0, f64::max),
            q.iter().copied().fold(f64::INFINITY, f64::min),
            q.iter().copied().fold(0.0, f64::max)
        ),
    ))
}

fn c11(dir: &Path) -> Result<Verdict> {
    let t = Table::read(dir, "farey.csv")?;
    let ts = t.reals("T")?;
    let (count, brute) = (t.reals("count")?, t.reals("brute")?);
    let mut checked = 0;
    let mut mismatch = 0;
    for i in 0..ts.len() {
        if let (Some(c), Some(b)) = (count[i], brute[i]) {
            checked += 1;
            if c != b {
                mismatch += 1;
            }
        }
    }
    if ts.len() < 200 {
        return na("needs brute force up to T = 200");
    }
    let Some(j) = ts.iter().position(|&x| x == Some(500.0)) else { return na("needs T = 500") };
    let ratio = count[j].unwrap_or(0.0) / 250000.0;
    let target = 3.0 / std::f64::consts::PI.powi(2);
    let rel = (ratio / target - 1.0).abs();
    Ok(Decided(
        mismatch == 0 && rel <= 0.05,
        format!("{mismatch} mismatches over T ≤ {checked}; count(500)/500² = {ratio:.5} vs 3/π² ({:.2}% off)", 100.0 * rel),
    ))
}

fn c12(dir: &Path) -> Result<Verdict> {
    let t = Table::read(dir, "entry.csv")?;
    let v: Vec<f64> = t.reals("stability")?.into_iter().flatten().collect();
    if v.len() < 1000 {
        return na(format!("{} configurations, acceptance needs 1000", v.len()));
    }
    let worst = v.iter().copied().fold(0.0, f64::max);
    Ok(Decided(worst <= 1.0, format!("max stability {worst:.4} (bound 1) over {} configurations", v.len())))
}

fn c13(dir: &Path) -> Result<Verdict> {
    let t = Table::read(dir, "lyapunov.csv")?;
    let meds = medians_by(&t, "R", "estimate")?;
    let want = [10.0, 14.0, 18.0];
    let got: Vec<_> = want.iter().filter_map(|&r| meds.iter().find(|x| x.0 == r)).collect();
    if got.len() < 3 {
        return na("needs radii 10, 14, 18");
    }
    if got[0].2 < 50 {
        return na(format!("{} points, acceptance needs 50", got[0].2));
    }
    if !dir.join("control.csv").exists() {
        return na("no control (custom presentation)");
    }
    let dec = got.windows(2).all(|w| w[1].1 < w[0].1);
    let ct = Table::read(dir, "control.csv")?;
    let (est, floor) = (ct.reals("estimate")?, ct.reals("floor")?);
    let ctrl = est.len() >= 3
        && est.iter().zip(&floor).all(|(e, f)| matches!((e, f), (Some(e), Some(f)) if *f > 0.0 && e >= f));
    let s: Vec<String> = got.iter().map(|g| format!("{:.4}", g.1)).collect();
    let c: Vec<String> =
        est.iter().zip(&floor).map(|(e, f)| format!("{:.3}≥{:.3}", e.unwrap_or(f64::NAN), f.unwrap_or(f64::NAN))).collect();
    Ok(Decided(dec && ctrl, format!("medians {} at R = 10, 14, 18; control {}", s.join(" > "), c.join(", "))))
}

fn c14(dir: &Path, m: &Manifest) -> Result<Verdict> {
    let t = Table::read(dir, "monotone.csv")?;
    let (c2, c, d) = (fitted(m, "monotone_c2"), fitted(m, "wm_c"), fitted(m, "wm_d"));
    let words = grouped(&t, "geodesic", "word")?;
    let floors = grouped(&t, "geodesic", "floored_excursions")?;
    if words.len() < 100 {
        return na(format!("{} geodesics, acceptance needs 100", words.len()));
    }
    let mut bad_mono = 0;
    let mut bad_wm = 0;
    for ((_, w), (_, f)) in words.iter().zip(&floors) {
        // rows are in time order within a geodesic
        let mut peak = f64::NEG_INFINITY;
        let mut ok = true;
        for &x in w {
            ok &= x >= peak - c2;
            peak = peak.max(x);
        }
        bad_mono += !ok as usize;
        bad_wm += !w.iter().zip(f).all(|(x, e)| x + d >= c * e * (1.0 - 1e-12)) as usize;
    }
    Ok(Decided(
        c.is_finite() && c > 0.0 && bad_mono == 0 && bad_wm == 0,
        format!(
            "(c1, c2) = (1, {c2}), (c, d) = ({c:.4}, {d}); violations {bad_mono} / {bad_wm} over {} geodesics",
            words.len()
        ),
    ))
}

fn c15(dir: &Path, m: &Manifest) -> Result<Verdict> {
    let t = Table::read(dir, "psi.csv")?;
    let meds = medians_by(&t, "T", "psi_average")?;
    let (Some(a), Some(b)) = (meds.iter().find(|x| x.0 == 100.0), meds.iter().find(|x| x.0 == 10000.0)) else {
        return na("needs horizons 100 and 10000");
    };
    if a.2 < 200 {
        return na(format!("{} seeds, acceptance needs 200", a.2));
    }
    let e = Table::read(dir, "excursions.csv")?;
    let (ints, fl) = (e.reals("psi_integral")?, e.reals("floored")?);
    let (lo, hi) = (fitted(m, "psi_band_lo"), fitted(m, "psi_band_hi"));
    let q: Vec<f64> = ints.iter().zip(&fl).filter_map(|(i, f)| Some((*i)? / (*f)?)).collect();
    let inside = q.iter().filter(|&&x| x >= lo * (1.0 - 1e-12) && x <= hi * (1.0 + 1e-12)).count();
    if q.len() < 1000 {
        return na(format!("{} excursions, acceptance needs 1000", q.len()));
    }
    Ok(Decided(
        inside == q.len() && lo > 0.0 && hi.is_finite() && b.1 > a.1,
        format!(
            "band [{lo:.4}, {hi:.4}] holds for {inside}/{} excursions; median psi-average {:.3} at T=100, {:.3} at T=10^4 over {} seeds",
            q.len(),
            a.1,
            b.1,
            a.2
        ),
    ))
}

fn decide(id: u32, dir: &Path, m: &Manifest) -> Result<Verdict> {
    match id {
        1 => c1_c2_identities(dir, m, "derivative", 1e-6, 1.0, "derivative_check"),
        2 => c1_c2_identities(dir, m, "displacement", 1e-9, 5.0, "displacement_check"),
        3 => c3(dir, m),
        4 => c4(dir, m),
        5 => c5(dir),
        6 => c6(dir, m),
        7 => c7(dir),
        8 => c8(dir),
        9 => c9(dir, m),
        10 => c10(dir),
        11 => c11(dir),
        12 => c12(dir),
        13 => c13(dir),
        14 => c14(dir, m),
        15 => c15(dir, m),
        _ => unreachable!("criterion {id} is not decided from one experiment"),
    }
}

fn outcome(id: u32, v: Verdict) -> Outcome {
    let title = TITLES[id as usize - 1];
    match v {
        Decided(p, detail) => Outcome { id, title, status: if p { Status::Pass } else { Status::Fail }, detail },
        NotApplicable(detail) => Outcome { id, title, status: Status::Skip, detail },
    }
}

/// Criteria decided by one experiment directory.
pub fn verify_experiment(dir: &Path, name: &str) -> Result<Vec<Outcome>> {
    let e = crate::experiments::find(name).ok_or_else(|| CliError::Config(format!("unknown experiment {name}")))?;
    let m = Manifest::read(dir)?;
    e.criteria.iter().map(|&id| Ok(outcome(id, decide(id, dir, &m)?))).collect()
}

/// Byte comparison of every CSV under two output roots.
pub fn compare_roots(a: &Path, b: &Path) -> Result<Verdict> {
    let mut files = 0;
    let mut differ = Vec::new();
    for e in REGISTRY {
        let (da, db) = (a.join(e.name), b.join(e.name));
        if !da.exists() {
            continue;
        }
        let m = Manifest::read(&da)?;
        for f in m.outputs.iter().filter(|f| f.ends_with(".csv")) {
            files += 1;
            let x = fs::read(da.join(f)).map_err(|_| CliError::MissingOutputs(da.join(f).display().to_string()))?;
            let y = fs::read(db.join(f)).map_err(|_| CliError::MissingOutputs(db.join(f).display().to_string()))?;
            if x != y {
                differ.push(format!("{}/{f}", e.name));
            }
        }
    }
    Ok(Decided(
        files > 0 && differ.is_empty(),
        if differ.is_empty() { format!("{files} CSV files byte-identical") } else { format!("differ: {}", differ.join(", ")) },
    ))
}

/// Every criterion, from the experiment directories under `root`.
/// Criterion 16 needs a second root from an identical rerun.
pub fn verify_root(root: &Path, rerun: Option<&Path>) -> Result<Vec<Outcome>> {
    let mut found: BTreeMap<u32, Outcome> = BTreeMap::new();
    let mut any = false;
    for e in REGISTRY {
        let dir = root.join(e.name);
        if !dir.join(crate::output::MANIFEST).exists() {
            for &id in e.criteria {
                found.insert(id, outcome(id, NotApplicable(format!("no {} outputs under {}", e.name, root.display()))));
            }
            continue;
        }
        any = true;
        for o in verify_experiment(&dir, e.name)? {
            found.insert(o.id, o);
        }
    }
    if !any {
        return Err(CliError::MissingOutputs(format!("no experiment outputs under {}", root.display())));
    }
    let o16 = match rerun {
        Some(b) => outcome(16, compare_roots(root, b)?),
        None => outcome(16, NotApplicable("needs a second run (verify --rerun DIR)".into())),
    };
    found.insert(16, o16);
    Ok(found.into_values().collect())
}

pub fn report(outcomes: &[Outcome]) -> String {
    outcomes.iter().map(|o| format!("{o}\n")).collect()
}
