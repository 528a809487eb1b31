use std::f64::consts::TAU;
use std::fs;

use cuspidal::group::{GroupElement, GroupPresentation, Mat2, MetricBall};
use cuspidal::hyperbolic::{boundary_derivative, distance, max_log_derivative, wrap_angle};
use cuspidal::lyapunov::{lyap_estimate, sample_visual};
use cuspidal::seed::derive;
use cuspidal::{BoundaryPoint, Complex64, Mobius};
use rayon::prelude::*;

use super::{stream, unit, Experiment, RunOutput};
use crate::config::{key, Config, Kind};
use crate::error::{CliError, Result};
use crate::output::{num, Table};
use crate::presentation::{self, AnyPresentation};

pub const LYAPUNOV: Experiment = Experiment {
    name: "lyapunov",
    about: "ball maxima of (1/R)·log g′(p) at uniform boundary points, a hyperbolic control, and derivative identities",
    keys: &[
        key("trials", Kind::Count, "50", "boundary points p uniform in the visual measure"),
        key("radii", Kind::Counts, "10,14,18", "word radii R"),
        key("ball_budget", Kind::Count, "2e6", "largest ball (elements) the run may enumerate"),
        key("presentation", Kind::Path, "", "presentation file; unset means PSL(2,Z) on {S, T}"),
        key("identity_trials", Kind::Count, "1000", "random (g, p) for the derivative and displacement identities"),
        key("fd_step", Kind::Real, "1e-5", "step of the symmetric finite difference"),
    ],
    criteria: &[1, 2, 13],
    run: lyapunov,
};

/// Stream tags.
const IDENTITY: u64 = 1;

fn lyapunov(c: &Config) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    identities(c, &mut out);
    match c.path("presentation") {
        None => estimates(c, &GroupPresentation::modular(), true, &mut out)?,
        Some(p) => {
            let text = fs::read_to_string(&p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            match presentation::parse(&text)? {
                AnyPresentation::Integer(g) => estimates(c, &g, false, &mut out)?,
                AnyPresentation::Float(g) => estimates(c, &g, false, &mut out)?,
            }
        }
    }
    Ok(out)
}

/// A disc isometry with `|a| ≤ 0.9` and a boundary angle.
fn random_map(s: u64) -> (Mobius, f64) {
    let u = |j| unit(derive(s, j));
    let a = Complex64::from_polar(0.9 * u(1).sqrt(), TAU * u(2));
    (Mobius::from_disc(TAU * u(0), a).expect("|a| < 1"), TAU * u(3))
}

fn identities(c: &Config, out: &mut RunOutput) {
    let n = c.count("identity_trials");
    let h = c.real("fd_step");
    let sb = stream(c.seed(), IDENTITY);
    let mut t = Table::new(
        "identities.csv",
        &["trial [index]", "kind [label]", "value [see kind]", "reference [see kind]", "error [see kind]"],
    );
    let der = out.time("derivative_check", || {
        (0..n)
            .map(|i| {
                let (m, p) = random_map(derive(sb, i as u64));
                let an = boundary_derivative(&m, BoundaryPoint::Angle(p));
                let arg = |x: f64| m.apply_disc(Complex64::from_polar(1.0, x)).arg();
                let fd = wrap_angle(arg(p + h) - arg(p - h)) / (2.0 * h);
                (an, fd, (an - fd).abs() / fd.abs())
            })
            .collect::<Vec<_>>()
    });
    let disp = out.time("displacement_check", || {
        let i0 = Complex64::new(0.0, 1.0);
        (0..n)
            .map(|i| {
                let (m, _) = random_map(derive(sb, i as u64));
                let (a, b) = (max_log_derivative(&m), distance(i0, m.apply(i0)));
                (a, b, (a - b).abs())
            })
            .collect::<Vec<_>>()
    });
    for (i, r) in der.iter().enumerate() {
        t.push(vec![i.to_string(), "derivative".into(), num(r.0), num(r.1), num(r.2)]);
    }
    for (i, r) in disp.iter().enumerate() {
        t.push(vec![i.to_string(), "displacement".into(), num(r.0), num(r.1), num(r.2)]);
    }
    out.tables.push(t);
}

fn estimates<E: GroupElement>(
    c: &Config,
    pres: &GroupPresentation<E>,
    modular: bool,
    out: &mut RunOutput,
) -> Result<()> {
    let radii: Vec<u32> = c.counts("radii").into_iter().map(|r| r as u32).collect();
    let rmax = *radii.iter().max().expect("nonempty");
    let x0 = pres.basepoint;
    let ball = out.time("ball", || MetricBall::enumerate(pres, rmax, c.count("ball_budget")))?;
    out.note("ball_sizes", ball.sizes());
    let base = c.seed();
    let ests = out.time("estimates", || {
        (0..c.count("trials"))
            .into_par_iter()
            .map(|i| lyap_estimate(sample_visual(derive(base, i as u64), x0), &radii, &ball, x0))
            .collect::<cuspidal::Result<Vec<_>>>()
    })?;
    let mut t = Table::new(
        "lyapunov.csv",
        &["point [index]", "angle [rad]", "R [generators]", "estimate [log-derivative per generator]", "witness [word]"],
    );
    for (i, e) in ests.iter().enumerate() {
        for ((r, v), w) in e.radii.iter().zip(&e.values).zip(&e.witnesses) {
            t.push(vec![i.to_string(), num(e.p.angle()), r.to_string(), num(*v), pres.word_string(&ball.witness(*w))]);
        }
    }
    out.tables.push(t);
    if modular {
        // h = T S T⁻¹ S up to sign; h⁻¹ expands at its attracting point by λ²
        let h = Mat2::new(2i64, 1, 1, 1);
        let m = h.to_mobius();
        let len = (0..ball.len())
            .find(|&j| ball.elements()[j].to_mobius() == m)
            .map(|j| ball.lengths()[j])
            .ok_or_else(|| CliError::Budget("control element outside the ball".into()))?;
        let (att, _) = m.fixed_points().expect("hyperbolic");
        let e = lyap_estimate(BoundaryPoint::Real(att), &radii, &ball, x0)?;
        let l2 = (m.trace() + (m.trace().powi(2) - 4.0).sqrt()).powi(2) / 4.0;
        let mut ct = Table::new(
            "control.csv",
            &["R [generators]", "estimate [log-derivative per generator]", "floor [log-derivative per generator]"],
        );
        for (r, v) in radii.iter().zip(&e.values) {
            let floor = (r / len) as f64 * l2.ln() / *r as f64;
            ct.push(vec![r.to_string(), num(*v), num(floor)]);
        }
        out.note("control_word_length", len);
        out.tables.push(ct);
    }
    Ok(())
}
