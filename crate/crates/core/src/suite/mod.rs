//! Per-module verification batteries and their assembly into reports.

mod clifford;
mod curvalg;
mod g2;
mod torus;
mod warped;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::report::{timed, CheckRecord, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteName {
    Clifford,
    Curvalg,
    Torus,
    G2,
    Warped,
    All,
}

impl SuiteName {
    /// The module suites in the order in which `all` merges them.
    pub const MODULES: [SuiteName; 5] =
        [SuiteName::Clifford, SuiteName::Curvalg, SuiteName::Torus, SuiteName::G2, SuiteName::Warped];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Clifford => "clifford",
            SuiteName::Curvalg => "curvalg",
            SuiteName::Torus => "torus",
            SuiteName::G2 => "g2",
            SuiteName::Warped => "warped",
            SuiteName::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::MODULES.into_iter().chain([SuiteName::All]).find(|n| n.as_str() == s).ok_or_else(|| {
            Error::Config(format!("unknown suite '{s}' (expected clifford, curvalg, torus, g2, warped or all)"))
        })
    }
}

/// Collects the records of one battery. Each check group runs under a
/// timer; a group that returns an error becomes a single failed record.
pub(crate) struct Battery<'a> {
    pub cfg: &'a Config,
    records: Vec<CheckRecord>,
}

impl<'a> Battery<'a> {
    fn new(cfg: &'a Config) -> Self {
        Self { cfg, records: Vec::new() }
    }

    pub fn run(&mut self, id: &str, anchor: &str, f: impl FnOnce(&Config) -> Result<Vec<CheckRecord>>) {
        let (out, secs) = timed(|| f(self.cfg));
        match out {
            Ok(records) => self.records.extend(records.into_iter().map(|r| r.with_time(secs))),
            Err(e) => self.records.push(CheckRecord::failed(id, anchor, e.to_string()).with_time(secs)),
        }
    }

    /// Seed for a named stream of this battery.
    pub fn seed(&self, label: u64) -> rand_chacha::ChaCha8Rng {
        crate::rng::derived(self.cfg.seed, label)
    }
}

fn run_module(name: SuiteName, cfg: &Config) -> VerificationReport {
    let mut battery = Battery::new(cfg);
    let (_, secs) = timed(|| match name {
        SuiteName::Clifford => clifford::run(&mut battery),
        SuiteName::Curvalg => curvalg::run(&mut battery),
        SuiteName::Torus => torus::run(&mut battery),
        SuiteName::G2 => g2::run(&mut battery),
        SuiteName::Warped => warped::run(&mut battery),
        SuiteName::All => unreachable!("all is not a module"),
    });
    let mut report = VerificationReport::new(name.as_str(), cfg.seed, cfg.to_value());
    report.extend(battery.records);
    report.wall_time = secs;
    report
}

/// Runs a suite. `all` runs the module suites in parallel and merges them
/// in the fixed order of [`SuiteName::MODULES`], prefixing record ids with
/// the module name.
pub fn run_suite(name: SuiteName, cfg: &Config) -> VerificationReport {
    if name != SuiteName::All {
        return run_module(name, cfg);
    }
    let (parts, secs) = timed(|| SuiteName::MODULES.par_iter().map(|&m| run_module(m, cfg)).collect::<Vec<_>>());
    let mut report = VerificationReport::new("all", cfg.seed, cfg.to_value());
    for part in parts {
        report.merge(part);
    }
    report.wall_time = secs;
    report
}
