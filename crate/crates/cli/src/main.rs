use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};
use cuspidal_cli::config::{normalize_key, parse_pairs, schema_text, Config, COMMON};
use cuspidal_cli::error::{CliError, Result};
use cuspidal_cli::experiments::{find, Experiment, REGISTRY};
use cuspidal_cli::verify::{report, verify_root, Status};

fn experiment_command(e: &Experiment) -> Command {
    let mut c = Command::new(e.name)
        .about(e.about)
        .after_help(schema_text(e.keys))
        .arg(Arg::new("config").long("config").value_name("FILE").help("flat key = value config file"));
    for k in COMMON.iter().chain(e.keys) {
        c = c.arg(Arg::new(k.name).long(k.name.replace('_', "-")).value_name("VALUE").help(k.help));
    }
    c
}

fn cli() -> Command {
    let mut c = Command::new("cuspidal")
        .version(cuspidal_cli::VERSION)
        .about("Seeded experiments on cusp excursions, word and relative metrics and Lyapunov estimates")
        .subcommand_required(true)
        .subcommand(Command::new("list").about("list the registered experiments"))
        .subcommand(
            Command::new("run")
                .about("run the experiment named by `experiment = NAME` in a config file")
                .arg(Arg::new("config").long("config").value_name("FILE").required(true))
                .arg(Arg::new("set").long("set").value_name("KEY=VALUE").action(ArgAction::Append)),
        )
        .subcommand(
            Command::new("verify")
                .about("re-evaluate every acceptance criterion from the outputs under DIR")
                .arg(Arg::new("dir").value_name("DIR").required(true))
                .arg(Arg::new("rerun").long("rerun").value_name("DIR").help("second output root for the reproducibility check")),
        );
    for e in REGISTRY {
        c = c.subcommand(experiment_command(e));
    }
    c
}

fn read_pairs(path: &str) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
    parse_pairs(&text)
}

fn run_experiment(e: &Experiment, pairs: Vec<(String, String)>) -> Result<()> {
    let cfg = Config::resolve(e.name, e.keys, &pairs)?;
    let (m, outcomes) = cuspidal_cli::run(e, &cfg)?;
    print!("{}", report(&outcomes));
    println!("wrote {} ({:.2} s)", cfg.out_dir().display(), m.wall_time_s);
    Ok(())
}

fn dispatch(m: &ArgMatches) -> Result<()> {
    match m.subcommand() {
        Some(("list", _)) => {
            for e in REGISTRY {
                println!("{:<18} {}", e.name, e.about);
            }
            Ok(())
        }
        Some(("run", sub)) => {
            let mut pairs = read_pairs(sub.get_one::<String>("config").expect("required"))?;
            for s in sub.get_many::<String>("set").into_iter().flatten() {
                let (k, v) = s.split_once('=').ok_or_else(|| CliError::Config(format!("--set {s:?}: expected KEY=VALUE")))?;
                pairs.push((normalize_key(k), v.trim().to_string()));
            }
            let name = pairs
                .iter()
                .find(|p| p.0 == "experiment")
                .map(|p| p.1.clone())
                .ok_or_else(|| CliError::Config("config names no experiment".into()))?;
            let e = find(&name).ok_or_else(|| CliError::Config(format!("unknown experiment {name:?}")))?;
            run_experiment(e, pairs)
        }
        Some(("verify", sub)) => {
            let dir = PathBuf::from(sub.get_one::<String>("dir").expect("required"));
            let rerun = sub.get_one::<String>("rerun").map(PathBuf::from);
            let outcomes = verify_root(&dir, rerun.as_deref())?;
            print!("{}", report(&outcomes));
            let failed: Vec<String> =
                outcomes.iter().filter(|o| o.status == Status::Fail).map(|o| o.id.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Assertion(format!("failing criteria: {}", failed.join(", "))))
            }
        }
        Some((name, sub)) => {
            let e = find(name).expect("subcommands come from the registry");
            let mut pairs = match sub.get_one::<String>("config") {
                Some(p) => read_pairs(p)?,
                None => Vec::new(),
            };
            for k in COMMON.iter().chain(e.keys) {
                if let Some(v) = sub.get_one::<String>(k.name) {
                    pairs.push((k.name.to_string(), v.clone()));
                }
            }
            run_experiment(e, pairs)
        }
        None => unreachable!("a subcommand is required"),
    }
}

fn main() -> ExitCode {
    let m = cli().get_matches();
    match dispatch(&m) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
