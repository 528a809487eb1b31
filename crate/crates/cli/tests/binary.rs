use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cuspidal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspidal")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn list_names_every_experiment() {
    let o = cuspidal(&["list"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    for e in cuspidal_cli::experiments::REGISTRY {
        assert!(s.contains(e.name));
    }
}

#[test]
fn bad_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = path(tmp.path());
    assert_eq!(code(&cuspidal(&["khinchin", "--no-such-flag", "1"])), 2);
    assert_eq!(code(&cuspidal(&["khinchin", "--trials", "0", "--out", out])), 2);
    assert_eq!(code(&cuspidal(&["khinchin", "--trials", "ten", "--out", out])), 2);
    assert_eq!(code(&cuspidal(&["verify", out])), 2);
    let conf = tmp.path().join("k.conf");
    fs::write(&conf, "experiment = tracking\ntrials = 3\n").unwrap();
    assert_eq!(code(&cuspidal(&["khinchin", "--config", path(&conf), "--out", out])), 2);
    assert_eq!(code(&cuspidal(&["run", "--config", path(&conf), "--set", "nope=1", "--set", &format!("out={out}")])), 2);
}

#[test]
fn budget_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cuspidal(&["lyapunov", "--ball-budget", "1000", "--identity-trials", "10", "--out", path(tmp.path())]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_and_flags_layer() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = tmp.path().join("t.conf");
    fs::write(&conf, "# small\nexperiment = tracking\ntrials = 3\nsteps = 200\ncheckpoints = 10,100\n").unwrap();
    let o = cuspidal(&["run", "--config", path(&conf), "--set", "trials=4", "--set", &format!("out={}", path(tmp.path()))]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = cuspidal_cli::output::Manifest::read(&tmp.path().join("tracking")).unwrap();
    assert!(m.config.contains("trials = 4\n") && m.config.contains("steps = 200\n"));
}

#[test]
fn verify_is_idempotent_and_catches_tampering() {
    let tmp = tempfile::tempdir().unwrap();
    let root = path(tmp.path());
    // lyapunov at its defaults is fast and decides criteria 1, 2 and 13
    let o = cuspidal(&["lyapunov", "--out", root]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let first = cuspidal(&["verify", root]);
    let second = cuspidal(&["verify", root]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let s = String::from_utf8(first.stdout).unwrap();
    assert!(s.contains("criterion  1  PASS") && s.contains("criterion 13  PASS") && s.contains("criterion  3  SKIP"));

    let f = tmp.path().join("lyapunov/identities.csv");
    let text = fs::read_to_string(&f).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut cells: Vec<String> = lines[1].split(',').map(String::from).collect();
    let last = cells.len() - 1;
    cells[last] = "0.5".into();
    lines[1] = cells.join(",");
    fs::write(&f, lines.join("\n") + "\n").unwrap();
    let o = cuspidal(&["verify", root]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8(o.stdout).unwrap().contains("criterion  1  FAIL"));

    fs::remove_file(&f).unwrap();
    assert_eq!(code(&cuspidal(&["verify", root])), 2);
}

#[test]
fn custom_presentation_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let pres = tmp.path().join("g.pres");
    fs::write(&pres, "gen A 1 2 0 1 parabolic\ngen B 1 0 2 1 parabolic\nbasepoint 0.3 1.1\n").unwrap();
    let o = cuspidal(&[
        "lyapunov", "--presentation", path(&pres), "--radii", "3,5", "--trials", "5", "--identity-trials", "20", "--out",
        path(tmp.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().contains("criterion 13  SKIP"));
    assert!(!tmp.path().join("lyapunov/control.csv").exists());

    fs::write(&pres, "gen A 2 0 0 1\nbasepoint 0 1\n").unwrap();
    let o = cuspidal(&["lyapunov", "--presentation", path(&pres), "--out", path(tmp.path())]);
    assert_eq!(code(&o), 2);
}
