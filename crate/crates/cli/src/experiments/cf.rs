use cuspidal::flow::khinchin_average;
use cuspidal::modular::{farey_count, gauss_prob, UniformReal};
use cuspidal::seed::derive;
use cuspidal::stats::median;
use rayon::prelude::*;

use super::{Experiment, RunOutput};
use crate::config::{key, Config, Kind};
use crate::error::Result;
use crate::output::{num, Table};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub const GAUSS: Experiment = Experiment {
    name: "gauss-stats",
    about: "frequencies of continued-fraction coefficients of uniform reals against the Gauss measure",
    keys: &[
        key("trials", Kind::Count, "1e6", "coefficients drawn in total"),
        key("per_seed", Kind::Count, "100", "coefficients taken from each uniform real"),
        key("kmax", Kind::Count, "20", "largest coefficient with its own row"),
    ],
    criteria: &[3],
    run: gauss,
};

fn gauss(c: &Config) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let (trials, per, kmax) = (c.count("trials"), c.count("per_seed"), c.count("kmax"));
    let seeds = trials.div_ceil(per);
    let base = c.seed();
    let counts = out.time("total", || {
        let per_seed: Vec<Vec<u64>> = (0..seeds)
            .into_par_iter()
            .map(|i| {
                let take = per.min(trials - i * per);
                let cf = UniformReal::new(derive(base, i as u64)).cf(take);
                let mut cnt = vec![0u64; kmax + 2];
                for &a in &cf.coeffs {
                    cnt[(a as usize).min(kmax + 1)] += 1;
                }
                cnt
            })
            .collect();
        let mut total = vec![0u64; kmax + 2];
        for v in per_seed {
            for (t, x) in total.iter_mut().zip(v) {
                *t += x;
            }
        }
        total
    });
    let n: u64 = counts.iter().sum();
    let mut t = Table::new(
        "gauss.csv",
        &["k [coefficient]", "count [coefficients]", "frequency [fraction]", "gauss_prob [probability]", "abs_diff [probability]"],
    );
    let mut chi2 = 0.0;
    let mut tail_prob = 1.0;
    for k in 1..=kmax + 1 {
        let (label, p) = if k <= kmax {
            let p = gauss_prob(k as u64);
            tail_prob -= p;
            (k.to_string(), p)
        } else {
            (format!(">{kmax}"), tail_prob)
        };
        let f = counts[k] as f64 / n as f64;
        let e = p * n as f64;
        chi2 += (counts[k] as f64 - e).powi(2) / e;
        t.push(vec![label, counts[k].to_string(), num(f), num(p), num((f - p).abs())]);
    }
    out.tables.push(t);
    out.note("coefficients", n);
    out.note("chi2", chi2);
    out.note("chi2_dof", kmax);
    Ok(out)
}

pub const KHINCHIN: Experiment = Experiment {
    name: "khinchin",
    about: "running means of continued-fraction coefficients, which diverge for almost every real",
    keys: &[
        key("trials", Kind::Count, "200", "uniform reals (seeds)"),
        key("checkpoints", Kind::Counts, "100,10000", "coefficient counts n at which (1/n)·Σa_i is recorded"),
    ],
    criteria: &[4],
    run: khinchin,
};

fn khinchin(c: &Config) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let ns = c.counts("checkpoints");
    let nmax = *ns.iter().max().expect("nonempty");
    let base = c.seed();
    let rows = out.time("total", || {
        (0..c.count("trials"))
            .into_par_iter()
            .map(|i| {
                let s = derive(base, i as u64);
                let cf = UniformReal::new(s).cf(nmax);
                ns.iter().map(|&n| khinchin_average(&cf.coeffs, n)).collect::<cuspidal::Result<Vec<f64>>>().map(|v| (s, v))
            })
            .collect::<cuspidal::Result<Vec<_>>>()
    })?;
    let mut t = Table::new("khinchin.csv", &["trial [index]", "seed [u64]", "n [coefficients]", "average [coefficient]"]);
    for (i, (s, v)) in rows.iter().enumerate() {
        for (&n, a) in ns.iter().zip(v) {
            t.push(vec![i.to_string(), s.to_string(), n.to_string(), num(*a)]);
        }
    }
    let medians: Vec<f64> = (0..ns.len()).map(|j| median(&rows.iter().map(|r| r.1[j]).collect::<Vec<_>>())).collect();
    out.note("checkpoints", &ns);
    out.note("medians", medians);
    out.tables.push(t);
    Ok(out)
}

pub const FAREY: Experiment = Experiment {
    name: "farey-count",
    about: "reduced fractions with bounded denominator against brute force and 3T²/π²",
    keys: &[
        key("brute_max", Kind::Count, "200", "largest T checked by brute-force enumeration"),
        key("t", Kind::Count, "500", "T for the asymptotic comparison"),
    ],
    criteria: &[11],
    run: farey,
};

fn farey(c: &Config) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let (bmax, big) = (c.count("brute_max") as u64, c.count("t") as u64);
    let mut t = Table::new(
        "farey.csv",
        &["T [denominator bound]", "count [fractions]", "brute [fractions]", "ratio_to_t2 [count/T^2]", "asymptote [count/T^2]"],
    );
    let asym = 3.0 / std::f64::consts::PI.powi(2);
    let mut brute = 0u64;
    let mut ts: Vec<u64> = (1..=bmax).collect();
    if !ts.contains(&big) {
        ts.push(big);
    }
    for &tt in &ts {
        let b = if tt <= bmax {
            // fractions p/q in (0, 1] with q = tt, by gcd
            brute += (1..=tt).filter(|&p| gcd(p, tt) == 1).count() as u64;
            brute.to_string()
        } else {
            String::new()
        };
        let f = farey_count(tt);
        t.push(vec![tt.to_string(), f.to_string(), b, num(f as f64 / (tt * tt) as f64), num(asym)]);
    }
    out.tables.push(t);
    Ok(out)
}
