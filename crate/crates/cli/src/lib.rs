//! Configured, seeded runs of the acceptance experiments, their CSV and
//! manifest outputs, and re-verification of the criteria from those files.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod presentation;
pub mod verify;

use std::fs;
use std::time::Instant;

use config::Config;
use error::{CliError, Result};
use experiments::Experiment;
use output::Manifest;
use verify::{Outcome, Status};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs `exp` and writes its tables and manifest under `cfg.out_dir()`.
/// The outputs are not judged here.
pub fn execute(exp: &Experiment, cfg: &Config) -> Result<Manifest> {
    let start = Instant::now();
    let mut out = (exp.run)(cfg)?;
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir)?;
    for t in &out.tables {
        t.write(&dir)?;
    }
    // JSON has no infinities; constants that could not be fitted are listed instead
    let unfitted: Vec<String> = out.fitted.iter().filter(|(_, v)| !v.is_finite()).map(|(k, _)| k.clone()).collect();
    out.fitted.retain(|_, v| v.is_finite());
    if !unfitted.is_empty() {
        out.note("unfitted", unfitted);
    }
    let m = Manifest {
        experiment: exp.name.to_string(),
        version: format!("cuspidal-cli {VERSION}"),
        config: cfg.echo(),
        wall_time_s: start.elapsed().as_secs_f64(),
        timings: out.timings,
        outputs: out.tables.iter().map(|t| t.file.clone()).collect(),
        fitted: out.fitted,
        summary: serde_json::Value::Object(out.summary),
    };
    m.write(&dir)?;
    Ok(m)
}

/// [`execute`], then the experiment's own criteria. Any failing criterion
/// turns into an assertion error after the outputs are written.
pub fn run(exp: &Experiment, cfg: &Config) -> Result<(Manifest, Vec<Outcome>)> {
    let m = execute(exp, cfg)?;
    let outcomes = verify::verify_experiment(&cfg.out_dir(), exp.name)?;
    let failed: Vec<String> =
        outcomes.iter().filter(|o| o.status == Status::Fail).map(|o| format!("criterion {} ({})", o.id, o.title)).collect();
    if failed.is_empty() {
        Ok((m, outcomes))
    } else {
        Err(CliError::Assertion(format!("{}\n{}", failed.join(", "), verify::report(&outcomes).trim_end())))
    }
}
