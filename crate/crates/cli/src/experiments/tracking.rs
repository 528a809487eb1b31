use cuspidal::group::MODULAR_BASEPOINT;
use cuspidal::seed::derive;
use cuspidal::walk::{hitting_point, sample_path, tracking_deviation, StepDistribution};
use rayon::prelude::*;

use super::{Experiment, RunOutput};
use crate::config::{key, Config, Kind};
use crate::error::Result;
use crate::output::{num, Table};

pub const TRACKING: Experiment = Experiment {
    name: "tracking",
    about: "distance from the walk w_k·x₀ to the geodesic from x₀ to its hitting point, per step",
    keys: &[
        key("trials", Kind::Count, "100", "sample paths of the uniform walk on {S, T, T⁻¹}"),
        key("steps", Kind::Count, "1500", "path length; the hitting point is bracketed from the whole path"),
        key("checkpoints", Kind::Counts, "10,100,1000", "steps k at which the deviation is recorded"),
        key("tolerance", Kind::Real, "1e-6", "chordal diameter at which the hitting point counts as converged"),
    ],
    criteria: &[8],
    run: tracking,
};

fn tracking(c: &Config) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let base = c.seed();
    let (n, tol) = (c.count("steps"), c.real("tolerance"));
    let ks: Vec<usize> = c.counts("checkpoints").into_iter().filter(|&k| k <= n).collect();
    let x0 = MODULAR_BASEPOINT;
    let mu = StepDistribution::modular_uniform();
    let runs = out.time("total", || {
        (0..c.count("trials"))
            .into_par_iter()
            .map(|i| {
                let p = sample_path(&mu, n, derive(base, i as u64));
                let hit = hitting_point(&p, tol).ok();
                let dev = tracking_deviation(&p, x0, tol).ok();
                (p.seed, hit, dev)
            })
            .collect::<Vec<_>>()
    });
    let mut dev_t = Table::new(
        "tracking.csv",
        &["path [index]", "seed [u64]", "k [steps]", "deviation [hyperbolic length]", "deviation_over_k [length per step]"],
    );
    let mut hit_t = Table::new(
        "hitting.csv",
        &["path [index]", "seed [u64]", "converged_step [steps]", "diameter [chordal]", "angle [rad]"],
    );
    let mut converged = 0;
    for (i, (s, hit, dev)) in runs.iter().enumerate() {
        match hit {
            Some(h) => {
                converged += 1;
                hit_t.push(vec![i.to_string(), s.to_string(), h.step.to_string(), num(h.diameter), num(h.point.angle())]);
            }
            None => hit_t.push(vec![i.to_string(), s.to_string(), String::new(), String::new(), String::new()]),
        }
        if let Some(d) = dev {
            for &k in &ks {
                // the core returns d(w_k·x₀, γ)/k
                let v = d[k - 1];
                dev_t.push(vec![i.to_string(), s.to_string(), k.to_string(), num(v * k as f64), num(v)]);
            }
        }
    }
    out.note("converged", converged);
    out.tables.push(dev_t);
    out.tables.push(hit_t);
    Ok(out)
}
