//! Flat `key = value` experiment configs.
//!
//! Every experiment declares a schema. Values are validated and stored in a
//! canonical text form, so a config echoed into a manifest parses back to an
//! equal config.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Positive integer; scientific notation such as `1e6` is accepted.
    Count,
    /// Any unsigned 64-bit integer.
    Seed,
    /// Finite real.
    Real,
    /// Comma-separated positive integers.
    Counts,
    /// Comma-separated finite reals.
    Reals,
    /// Filesystem path; empty means unset.
    Path,
    /// One of a fixed set of words.
    Choice(&'static [&'static str]),
}

impl Kind {
    fn describe(self) -> String {
        match self {
            Kind::Count => "positive integer".into(),
            Kind::Seed => "u64".into(),
            Kind::Real => "real".into(),
            Kind::Counts => "list of positive integers".into(),
            Kind::Reals => "list of reals".into(),
            Kind::Path => "path".into(),
            Kind::Choice(c) => c.join("|"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub help: &'static str,
}

pub const fn key(name: &'static str, kind: Kind, default: &'static str, help: &'static str) -> Key {
    Key { name, kind, default, help }
}

/// Keys every experiment accepts.
pub const COMMON: &[Key] = &[
    key("seed", Kind::Seed, "7", "base seed; trial i uses derive(seed, i)"),
    key("out", Kind::Path, "runs", "output root; files go to <out>/<experiment>/"),
];

/// Renders the schema of one experiment as help text.
pub fn schema_text(keys: &[Key]) -> String {
    let mut s = String::from("Config keys (flat `key = value`, unknown keys rejected):\n");
    for k in COMMON.iter().chain(keys) {
        let d = if k.default.is_empty() { "unset".to_string() } else { k.default.to_string() };
        let _ = writeln!(s, "  {:<20} {:<28} default {:<16} {}", k.name, k.kind.describe(), d, k.help);
    }
    s
}

fn parse_count(v: &str) -> Option<u64> {
    if let Ok(n) = v.parse::<u64>() {
        return Some(n);
    }
    let x: f64 = v.parse().ok()?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x < 1.8e19 {
        Some(x as u64)
    } else {
        None
    }
}

fn parse_real(v: &str) -> Option<f64> {
    v.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Validates `v` against `kind` and returns its canonical text.
fn canonical(name: &str, kind: Kind, v: &str) -> Result<String, CliError> {
    let bad = |what: &str| CliError::Config(format!("{name} = {v:?}: expected {what}"));
    let v = v.trim();
    match kind {
        Kind::Count => match parse_count(v) {
            Some(n) if n > 0 => Ok(n.to_string()),
            _ => Err(bad("a positive integer")),
        },
        Kind::Seed => parse_count(v).map(|n| n.to_string()).ok_or_else(|| bad("an unsigned integer")),
        Kind::Real => parse_real(v).map(|x| x.to_string()).ok_or_else(|| bad("a finite real")),
        Kind::Counts => {
            let xs: Option<Vec<u64>> = v.split(',').map(|p| parse_count(p.trim()).filter(|&n| n > 0)).collect();
            match xs {
                Some(xs) if !xs.is_empty() => Ok(xs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")),
                _ => Err(bad("comma-separated positive integers")),
            }
        }
        Kind::Reals => {
            let xs: Option<Vec<f64>> = v.split(',').map(|p| parse_real(p.trim())).collect();
            match xs {
                Some(xs) if !xs.is_empty() => Ok(xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
                _ => Err(bad("comma-separated reals")),
            }
        }
        Kind::Path => Ok(v.to_string()),
        Kind::Choice(c) => {
            if c.contains(&v) {
                Ok(v.to_string())
            } else {
                Err(bad(&c.join("|")))
            }
        }
    }
}

/// Normalizes `--lebesgue-seeds` style names to `lebesgue_seeds`.
pub fn normalize_key(k: &str) -> String {
    k.trim().trim_start_matches("--").replace('-', "_")
}

/// Parses `key = value` lines, skipping blanks and `#` comments.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", i + 1)))?;
        out.push((normalize_key(k), v.trim().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub experiment: String,
    values: BTreeMap<String, String>,
}

impl Config {
    /// Defaults, then `pairs` in order. Unknown keys and an `experiment` key
    /// naming a different experiment are rejected.
    pub fn resolve(experiment: &str, keys: &[Key], pairs: &[(String, String)]) -> Result<Config, CliError> {
        let all: Vec<&Key> = COMMON.iter().chain(keys).collect();
        let mut values = BTreeMap::new();
        for k in &all {
            values.insert(k.name.to_string(), canonical(k.name, k.kind, k.default)?);
        }
        for (k, v) in pairs {
            if k == "experiment" {
                if v.trim() != experiment {
                    return Err(CliError::Config(format!("config is for {:?}, not {experiment:?}", v.trim())));
                }
                continue;
            }
            let spec = all
                .iter()
                .find(|s| s.name == k)
                .ok_or_else(|| CliError::Config(format!("unknown key {k:?} for {experiment}")))?;
            values.insert(k.clone(), canonical(k, spec.kind, v)?);
        }
        Ok(Config { experiment: experiment.to_string(), values })
    }

    /// The config as `key = value` lines, `experiment` first.
    pub fn echo(&self) -> String {
        let mut s = format!("experiment = {}\n", self.experiment);
        for (k, v) in &self.values {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn pairs(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn raw(&self, k: &str) -> &str {
        self.values.get(k).map(String::as_str).unwrap_or_else(|| panic!("key {k} not in schema"))
    }

    pub fn seed(&self) -> u64 {
        self.raw("seed").parse().expect("validated")
    }

    pub fn count(&self, k: &str) -> usize {
        self.raw(k).parse().expect("validated")
    }

    pub fn real(&self, k: &str) -> f64 {
        self.raw(k).parse().expect("validated")
    }

    pub fn counts(&self, k: &str) -> Vec<usize> {
        self.raw(k).split(',').map(|p| p.parse().expect("validated")).collect()
    }

    pub fn reals(&self, k: &str) -> Vec<f64> {
        self.raw(k).split(',').map(|p| p.parse().expect("validated")).collect()
    }

    pub fn text(&self, k: &str) -> &str {
        self.raw(k)
    }

    pub fn path(&self, k: &str) -> Option<PathBuf> {
        Some(self.raw(k)).filter(|s| !s.is_empty()).map(PathBuf::from)
    }

    /// `<out>/<experiment>`.
    pub fn out_dir(&self) -> PathBuf {
        self.path("out").unwrap_or_else(|| PathBuf::from(".")).join(&self.experiment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KEYS: &[Key] = &[
        key("trials", Kind::Count, "1e6", "coefficients"),
        key("radii", Kind::Counts, "10,14,18", ""),
        key("dt", Kind::Real, "0.05", ""),
        key("sweep", Kind::Choice(&["default"]), "default", ""),
    ];

    #[test]
    fn defaults_are_canonical() {
        let c = Config::resolve("x", KEYS, &[]).unwrap();
        assert_eq!(c.count("trials"), 1_000_000);
        assert_eq!(c.counts("radii"), vec![10, 14, 18]);
        assert_eq!(c.seed(), 7);
    }

    #[test]
    fn echo_round_trips() {
        let pairs = parse_pairs("# c\nseed = 11\ntrials=2e3\n\ndt = 1e-2\n").unwrap();
        let c = Config::resolve("x", KEYS, &pairs).unwrap();
        let back = Config::resolve("x", KEYS, &parse_pairs(&c.echo()).unwrap()).unwrap();
        assert_eq!(c, back);
        assert_eq!(c.real("dt"), 0.01);
    }

    #[test]
    fn rejects_bad_input() {
        let r = |s: &str| Config::resolve("x", KEYS, &parse_pairs(s).unwrap());
        assert!(r("bogus = 1").is_err());
        assert!(r("trials = 0").is_err());
        assert!(r("trials = 1.5").is_err());
        assert!(r("radii = 10,,3").is_err());
        assert!(r("dt = nan").is_err());
        assert!(r("sweep = wide").is_err());
        assert!(r("experiment = y").is_err());
        assert!(parse_pairs("no equals sign").is_err());
    }
}
