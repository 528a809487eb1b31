use cuspidal::flow::{run_geodesic, Checkpoints, Endpoint};
use cuspidal::group::Mat2;
use cuspidal::seed::derive;
use cuspidal::walk::{drift_rel, drift_word, sample_path, LengthOracle, ModularOracle, StepDistribution};
use rayon::prelude::*;

use super::{stream, Experiment, RunOutput};
use crate::config::{key, Config, Kind};
use crate::error::{CliError, Result};
use crate::output::{num, Table};

pub const RATIO: Experiment = Experiment {
    name: "ratio-dichotomy",
    about: "d_G/d_rel along Lebesgue-typical geodesics (diverges) and along random walks (stabilizes)",
    keys: &[
        key("lebesgue_seeds", Kind::Count, "200", "uniform endpoints"),
        key("checkpoints", Kind::Counts, "100,1000,10000", "coefficient counts n for the Lebesgue table"),
        key("walk_paths", Kind::Count, "500", "random-walk sample paths"),
        key("walk_steps", Kind::Counts, "10,30", "steps k for the walk table; the largest is the drift step"),
        key("heavy_tail_weight", Kind::Real, "0", "mass moved to powers T^{±k} (0 keeps the uniform walk)"),
        key("heavy_tail_rho", Kind::Real, "0.5", "geometric decay of the heavy tail"),
    ],
    criteria: &[5, 6, 7],
    run: ratio,
};

/// Stream tag of the walk paths.
const WALK: u64 = 1;

fn ratio(c: &Config) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let base = c.seed();
    let ns = c.counts("checkpoints");
    let rows = out.time("lebesgue", || {
        (0..c.count("lebesgue_seeds"))
            .into_par_iter()
            .map(|i| {
                let s = derive(base, i as u64);
                run_geodesic(Endpoint::Seeded(s), 0.0, &Checkpoints::Coefficients(ns.clone())).map(|r| (s, r))
            })
            .collect::<cuspidal::Result<Vec<_>>>()
    })?;
    let mut leb = Table::new(
        "lebesgue.csv",
        &[
            "trial [index]",
            "seed [u64]",
            "n [coefficients]",
            "time [hyperbolic length]",
            "word_proxy [generators]",
            "rel_proxy [generators]",
            "rho [ratio]",
        ],
    );
    for (i, (s, r)) in rows.iter().enumerate() {
        for cp in &r.checkpoints {
            leb.push(vec![
                i.to_string(),
                s.to_string(),
                cp.coefficients.to_string(),
                num(cp.time),
                cp.word_proxy.to_string(),
                cp.rel_proxy.to_string(),
                cp.rho().map(num).unwrap_or_default(),
            ]);
        }
    }
    out.tables.push(leb);

    let mut mu = StepDistribution::modular_uniform();
    let w = c.real("heavy_tail_weight");
    if w != 0.0 {
        let t = Mat2::new(1i64, 1, 0, 1).to_big();
        mu = mu.with_heavy_tail(&t, w, c.real("heavy_tail_rho")).map_err(|e| CliError::Config(e.to_string()))?;
    }
    let ks = c.counts("walk_steps");
    let kmax = *ks.iter().max().expect("nonempty");
    let wbase = stream(base, WALK);
    let (paths, table) = out.time("walk", || {
        let paths: Vec<_> =
            (0..c.count("walk_paths")).into_par_iter().map(|i| sample_path(&mu, kmax, derive(wbase, i as u64))).collect();
        let rows: Vec<Vec<Vec<String>>> = paths
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                ks.iter()
                    .map(|&k| {
                        let l = ModularOracle.lengths(&p.locations[k]);
                        let cell = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
                        let r = match (l.word, l.rel) {
                            (Some(a), Some(b)) if b > 0 => num(a as f64 / b as f64),
                            _ => String::new(),
                        };
                        vec![i.to_string(), p.seed.to_string(), k.to_string(), cell(l.word), cell(l.rel), r]
                    })
                    .collect()
            })
            .collect();
        let mut t = Table::new(
            "walk.csv",
            &["path [index]", "seed [u64]", "k [steps]", "word [generators]", "rel [generators]", "ratio [ratio]"],
        );
        for r in rows.into_iter().flatten() {
            t.push(r);
        }
        (paths, t)
    });
    out.tables.push(table);
    let dw = drift_word(&paths, &ModularOracle, kmax)?;
    let dr = drift_rel(&paths, &ModularOracle, kmax)?;
    out.note("drift_word", dw);
    out.note("drift_rel", dr);
    out.fitted.insert("drift_word".into(), dw.estimate.mean);
    out.fitted.insert("drift_rel".into(), dr.estimate.mean);
    Ok(out)
}
