//! Runs every experiment at its default (acceptance) configuration twice,
//! then prints one line per criterion. The process fails if any criterion
//! other than the known failures does not pass.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use cuspidal_cli::config::Config;
use cuspidal_cli::experiments::REGISTRY;
use cuspidal_cli::verify::{verify_root, Status};

/// Additive equivalence of the two excursion definitions does not hold;
/// they agree only up to a multiplicative constant (see the README).
const KNOWN_FAILURES: &[u32] = &[10];

fn run_all(root: &Path) {
    for e in REGISTRY {
        let pairs = vec![("out".to_string(), root.display().to_string())];
        let cfg = Config::resolve(e.name, e.keys, &pairs).expect("defaults resolve");
        let t = Instant::now();
        cuspidal_cli::execute(e, &cfg).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        eprintln!("  {} ({:.1} s)", e.name, t.elapsed().as_secs_f64());
    }
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temp dir");
    let (a, b) = (tmp.path().join("first"), tmp.path().join("second"));
    eprintln!("acceptance: first run");
    run_all(&a);
    eprintln!("acceptance: second run");
    run_all(&b);
    let outcomes = verify_root(&a, Some(&b)).expect("outputs verify");
    let mut unexpected = Vec::new();
    for o in &outcomes {
        println!("{o}");
        let known = KNOWN_FAILURES.contains(&o.id);
        match (o.status, known) {
            (Status::Pass, false) | (Status::Fail, true) => {}
            _ => unexpected.push(o.id),
        }
    }
    let pass = outcomes.iter().filter(|o| o.status == Status::Pass).count();
    println!("acceptance: {pass}/{} PASS, known failures {KNOWN_FAILURES:?}", outcomes.len());
    if outcomes.len() != 16 || !unexpected.is_empty() {
        println!("acceptance: unexpected outcomes for criteria {unexpected:?}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
