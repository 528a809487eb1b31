use cuspidal::flow::{floor_a, psi_average_sampled, psi_integral, run_geodesic, Checkpoints, Endpoint};
use cuspidal::seed::derive;
use rayon::prelude::*;

use super::{Experiment, RunOutput};
use crate::config::{key, Config, Kind};
use crate::error::Result;
use crate::output::{num, opt, Table};

pub const PSI: Experiment = Experiment {
    name: "psi-average",
    about: "time averages of the cusp-depth function ψ and per-excursion ψ integrals",
    keys: &[
        key("trials", Kind::Count, "200", "uniform endpoints"),
        key("horizons", Kind::Reals, "100,10000", "times T at which the ψ-average is recorded"),
        key("excursions", Kind::Count, "1000", "excursions with ⌊E⌋_A > 0 kept for the band fit"),
        key("floor_a", Kind::Real, "10", "threshold A of ⌊E⌋_A"),
        key("cross_check", Kind::Count, "10", "leading trials whose ψ-average is also sampled on a grid"),
        key("dt", Kind::Real, "0.01", "grid step of the sampled cross-check"),
    ],
    criteria: &[15],
    run: psi,
};

struct Passage {
    trial: usize,
    entry: f64,
    exit: f64,
    excursion: f64,
    integral: f64,
}

fn psi(c: &Config) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let base = c.seed();
    let hs = c.reals("horizons");
    let tmax = hs.iter().copied().fold(0.0, f64::max);
    let (a, dt, cross) = (c.real("floor_a"), c.real("dt"), c.count("cross_check"));
    let want = c.count("excursions");
    let runs = out.time("total", || {
        (0..c.count("trials"))
            .into_par_iter()
            .map(|i| {
                let s = derive(base, i as u64);
                let r = run_geodesic(Endpoint::Seeded(s), tmax, &Checkpoints::Times(hs.clone()))?;
                let sampled: Vec<Option<f64>> = hs
                    .iter()
                    .map(|&t| (i < cross).then(|| psi_average_sampled(&r.levels, t, dt)))
                    .collect();
                // whole passages inside [0, T_max] that clear the floor
                let passages: Vec<Passage> = r
                    .levels
                    .iter()
                    .filter(|l| l.crosses(1.0))
                    .filter_map(|l| {
                        let w = l.half_width(1.0);
                        let (t0, t1) = (l.apex - w, l.apex + w);
                        let e = 2.0 * (l.radius * l.radius - 1.0).sqrt();
                        (t0 >= 0.0 && t1 <= tmax && floor_a(e, a) > 0.0).then(|| Passage {
                            trial: i,
                            entry: t0,
                            exit: t1,
                            excursion: e,
                            integral: psi_integral(l, t0, t1),
                        })
                    })
                    .collect();
                Ok((s, r.checkpoints, sampled, passages))
            })
            .collect::<cuspidal::Result<Vec<_>>>()
    })?;
    let mut t = Table::new(
        "psi.csv",
        &[
            "trial [index]",
            "seed [u64]",
            "T [hyperbolic length]",
            "psi_average [psi per unit time]",
            "psi_sampled [psi per unit time]",
            "max_depth [hyperbolic length]",
            "depth_over_log_t [ratio]",
        ],
    );
    for (i, (s, cps, sampled, _)) in runs.iter().enumerate() {
        for (cp, sm) in cps.iter().zip(sampled) {
            t.push(vec![
                i.to_string(),
                s.to_string(),
                num(cp.time),
                num(cp.psi_average),
                opt(*sm),
                num(cp.max_depth),
                num(cp.max_depth / cp.time.ln()),
            ]);
        }
    }
    out.tables.push(t);
    let mut e = Table::new(
        "excursions.csv",
        &[
            "trial [index]",
            "entry [hyperbolic time]",
            "exit [hyperbolic time]",
            "excursion [horocyclic length]",
            "floored [horocyclic length]",
            "psi_integral [psi x time]",
            "ratio [psi x time per length]",
        ],
    );
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for p in runs.iter().flat_map(|r| &r.3).take(want) {
        let fl = floor_a(p.excursion, a);
        let q = p.integral / fl;
        lo = lo.min(q);
        hi = hi.max(q);
        e.push(vec![
            p.trial.to_string(),
            num(p.entry),
            num(p.exit),
            num(p.excursion),
            num(fl),
            num(p.integral),
            num(q),
        ]);
    }
    out.note("excursions_kept", e.rows.len());
    out.tables.push(e);
    out.fitted.insert("psi_band_lo".into(), lo);
    out.fitted.insert("psi_band_hi".into(), hi);
    Ok(out)
}
