use cuspidal::flat_cylinder::{
    default_sweep, entry_exit_times, excursion_comparison, length_at, twist_at, twist_difference,
};
use cuspidal::Error;

use super::{Experiment, RunOutput};
use crate::config::{key, Config, Kind};
use crate::error::Result;
use crate::output::{num, Table};

pub const CYLINDER: Experiment = Experiment {
    name: "cylinder-check",
    about: "closed-form flat-cylinder crossing times and twists against direct evaluation",
    keys: &[key("sweep", Kind::Choice(&["default"]), "default", "parameter sweep (ℓ₀, tanθ₀, ε, A)")],
    criteria: &[9],
    run: cylinder,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn cylinder(_c: &Config) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    let mut t = Table::new(
        "cylinder.csv",
        &[
            "l0 [length]",
            "tan_theta0 [slope]",
            "area [area]",
            "eps [squared length]",
            "t1 [time]",
            "t2 [time]",
            "length_residual_1 [relative]",
            "length_residual_2 [relative]",
            "twist_closed [twist]",
            "twist_direct [twist]",
            "twist_residual [relative]",
            "phi_max [rad]",
            "ratio [ratio]",
            "status [label]",
        ],
    );
    let rows = out.time("total", || {
        default_sweep()
            .into_iter()
            .map(|p| {
                let mut row = vec![num(p.l0), num(p.theta0.tan()), num(p.area), num(p.eps)];
                let Some((t1, t2)) = entry_exit_times(&p) else {
                    row.extend(std::iter::repeat(String::new()).take(9));
                    row.push("miss".into());
                    return row;
                };
                let closed = twist_difference(&p).unwrap_or(f64::NAN);
                let direct = twist_at(&p, t2) - twist_at(&p, t1);
                row.extend([
                    num(t1),
                    num(t2),
                    num(rel(length_at(&p, t1), p.eps)),
                    num(rel(length_at(&p, t2), p.eps)),
                    num(closed),
                    num(direct),
                    num(rel(closed, direct)),
                ]);
                match excursion_comparison(&p) {
                    Ok(cmp) => row.extend([num(cmp.phi_max), num(cmp.ratio), "ok".into()]),
                    Err(Error::Hypothesis(_)) => row.extend([String::new(), String::new(), "near-tangent".into()]),
                    Err(e) => row.extend([String::new(), String::new(), e.to_string()]),
                }
                row
            })
            .collect::<Vec<_>>()
    });
    for r in rows {
        t.push(r);
    }
    out.tables.push(t);
    Ok(out)
}
