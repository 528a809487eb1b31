//! The experiment registry.

mod cf;
mod cylinder;
mod dichotomy;
mod lyap;
mod psi;
mod shadow;
mod tracking;

use std::collections::BTreeMap;
use std::time::Instant;

use crate::config::{Config, Key};
use crate::error::Result;
use crate::output::Table;

/// What an experiment hands back before anything is written.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub timings: BTreeMap<String, f64>,
    pub fitted: BTreeMap<String, f64>,
    pub summary: serde_json::Map<String, serde_json::Value>,
}

impl RunOutput {
    pub fn time<T>(&mut self, section: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let v = f();
        self.timings.insert(section.to_string(), t.elapsed().as_secs_f64());
        v
    }

    pub fn note(&mut self, k: &str, v: impl serde::Serialize) {
        self.summary.insert(k.to_string(), serde_json::to_value(v).expect("summary values serialize"));
    }
}

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [Key],
    /// Acceptance criteria this experiment's outputs decide.
    pub criteria: &'static [u32],
    pub run: fn(&Config) -> Result<RunOutput>,
}

pub static REGISTRY: &[Experiment] = &[
    cf::GAUSS,
    cf::KHINCHIN,
    dichotomy::RATIO,
    psi::PSI,
    lyap::LYAPUNOV,
    cylinder::CYLINDER,
    shadow::SHADOW,
    tracking::TRACKING,
    cf::FAREY,
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

/// Base seed of an auxiliary stream; trial `i` of it uses
/// `derive(stream(seed, tag), i)`. The main stream is `derive(seed, i)`.
pub fn stream(seed: u64, tag: u64) -> u64 {
    cuspidal::seed::derive(seed, u64::MAX - tag)
}

/// A uniform double in [0, 1) for trial seed `s`.
pub fn unit(s: u64) -> f64 {
    cuspidal::modular::UniformReal::new(s).to_f64()
}
