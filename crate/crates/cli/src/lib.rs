//! Reporting and file handling behind the `primeconv` binary.
//!
//! Every command is a plain function from a [`BenchConfig`] to a report
//! value, so the binary only parses flags and writes output.

pub mod bench;
pub mod io;
pub mod table;
pub mod transform;
pub mod verify;

use std::fmt;

use anyhow::{bail, Context};
use primeconv::crt::two_factor_schedule;
use primeconv::{predicted_counts, Engine, OpTally};

/// Output encoding for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Markdown,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Markdown => "markdown",
            Format::Json => "json",
        })
    }
}

/// Configuration shared by `table`, `verify` and `bench`.
///
/// Identical configurations produce identical random inputs, counts and
/// errors; only timings vary between runs.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub engines: Vec<Engine>,
    pub trials: usize,
    pub seed: u64,
    /// Overrides every floating-point tolerance when set.
    pub tolerance: Option<f64>,
    pub format: Format,
    /// Include wall-clock measurements in `table` output.
    pub timing: bool,
    /// Perturbation added to one host value of every fast plan in the
    /// oracle-equivalence suites of `verify`.
    pub fault: Option<f64>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: Vec::new(),
            engines: Engine::ALL.to_vec(),
            trials: 100,
            seed: 42,
            tolerance: None,
            format: Format::Markdown,
            timing: false,
            fault: None,
        }
    }
}

/// Parses `"3,5,7"` and ranges such as `"2-32,53"`.
pub fn parse_sizes(list: &str) -> anyhow::Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: usize = lo
                .trim()
                .parse()
                .with_context(|| format!("bad size range '{part}'"))?;
            let hi: usize = hi
                .trim()
                .parse()
                .with_context(|| format!("bad size range '{part}'"))?;
            if lo > hi {
                bail!("empty size range '{part}'");
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().with_context(|| format!("bad size '{part}'"))?);
        }
    }
    if out.is_empty() {
        bail!("no sizes given");
    }
    if let Some(&n) = out.iter().find(|&&n| n < 2) {
        bail!("size {n} is too short: at least 2 samples are required");
    }
    Ok(out)
}

/// Parses a comma-separated engine list.
pub fn parse_engines(list: &str) -> anyhow::Result<Vec<Engine>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let e: Engine = part.parse()?;
        if !out.contains(&e) {
            out.push(e);
        }
    }
    if out.is_empty() {
        bail!("no engines given");
    }
    Ok(out)
}

/// Closed-form `(M, A)` for one execution: `n^2, n(n-1)` for direct
/// evaluation, the published formula for the fast engine, and the exact
/// schedule for the two-factor engine.
pub fn predicted_tally(engine: Engine, n: usize) -> anyhow::Result<OpTally> {
    Ok(match engine {
        Engine::Direct => {
            let n = n as u64;
            OpTally::new(n * n, n * (n - 1))
        }
        Engine::FastPrime => {
            let (m, a) = predicted_counts(n)?;
            OpTally::new(m, a)
        }
        Engine::WinogradTwoFactor => two_factor_schedule(n)?,
    })
}

/// Fixed-width scientific notation, so reports compare byte for byte.
pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}
