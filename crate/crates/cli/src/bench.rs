//! Wall-clock timing in plain arithmetic mode, plus counted multiplication
//! ratios against both baselines.
//!
//! Timings are informational. The fast/direct multiplication ratio is
//! checked against its closed form, and against 0.51 from n = 11 on.

use std::time::Instant;

use anyhow::bail;
use primeconv::sample::{real_signal, stream_rng};
use primeconv::{Engine, OpTally, Plain};
use serde::Serialize;

use crate::{BenchConfig, Format};

pub const DEFAULT_SIZES: [usize; 3] = [101, 499, 997];
pub const DEFAULT_TRIALS: usize = 10;
pub const MIN_TRIALS: usize = 3;
pub const RATIO_BOUND: f64 = 0.51;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timing {
    pub mean_ns: f64,
    pub min_ns: f64,
}

/// Times `trials` executions of a kernel prepared once from random data.
/// Preparation is not timed.
pub fn time_engine(
    engine: Engine,
    n: usize,
    trials: usize,
    seed: u64,
    stream: u64,
) -> anyhow::Result<Timing> {
    let mut rng = stream_rng(seed, stream);
    let kernel = engine.prepare(&real_signal(&mut rng, n))?;
    let inputs: Vec<_> = (0..trials.max(1))
        .map(|_| real_signal(&mut rng, n))
        .collect();
    let mut total = 0.0;
    let mut min = f64::INFINITY;
    for z in &inputs {
        let start = Instant::now();
        let out = kernel.execute(z, &mut Plain)?;
        let ns = start.elapsed().as_nanos() as f64;
        std::hint::black_box(out);
        total += ns;
        min = min.min(ns);
    }
    Ok(Timing {
        mean_ns: total / inputs.len() as f64,
        min_ns: min,
    })
}

fn counted(engine: Engine, n: usize, seed: u64) -> anyhow::Result<OpTally> {
    let mut rng = stream_rng(seed, u64::MAX - n as u64);
    let b = real_signal(&mut rng, n);
    let z = real_signal(&mut rng, n);
    let mut tally = OpTally::default();
    engine.prepare(&b)?.execute(&z, &mut tally)?;
    Ok(tally)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub engine: String,
    pub trials: usize,
    pub mean_ns: f64,
    pub min_ns: f64,
    pub mults: u64,
    pub adds: u64,
    /// Counted multiplications over those of direct evaluation.
    pub mult_ratio_vs_direct: f64,
    /// Counted multiplications over those of the two-factor engine.
    pub mult_ratio_vs_two_factor: f64,
    /// `mults / 2(n-1)`.
    pub bound_ratio: f64,
    pub time_ratio_vs_direct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Failed count-ratio checks; empty when all hold.
    pub failures: Vec<String>,
}

impl BenchReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn cmd_bench(cfg: &BenchConfig) -> anyhow::Result<BenchReport> {
    if cfg.trials < MIN_TRIALS {
        bail!(
            "bench needs at least {MIN_TRIALS} trials, got {}",
            cfg.trials
        );
    }
    if cfg.sizes.is_empty() {
        bail!("no sizes given");
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut stream = 0u64;
    for &n in &cfg.sizes {
        let direct = counted(Engine::Direct, n, cfg.seed)?;
        let two_factor = counted(Engine::WinogradTwoFactor, n, cfg.seed)?;
        let fast = counted(Engine::FastPrime, n, cfg.seed)?;

        let expected = (n * (n - 1) / 2 + 1) as u64;
        if fast.mults != expected {
            failures.push(format!(
                "n = {n}: fast-prime counted {} mults, expected {expected}",
                fast.mults
            ));
        }
        let ratio = fast.mults as f64 / direct.mults as f64;
        if n >= 11 && ratio > RATIO_BOUND {
            failures.push(format!(
                "n = {n}: fast/direct ratio {ratio:.4} exceeds {RATIO_BOUND}"
            ));
        }

        let first = rows.len();
        let mut direct_mean = None;
        for &engine in &cfg.engines {
            let t = time_engine(engine, n, cfg.trials, cfg.seed, stream)?;
            stream += 1;
            let tally = match engine {
                Engine::Direct => direct,
                Engine::FastPrime => fast,
                Engine::WinogradTwoFactor => two_factor,
            };
            if engine == Engine::Direct {
                direct_mean = Some(t.mean_ns);
            }
            rows.push(BenchRow {
                n,
                engine: engine.name().to_string(),
                trials: cfg.trials,
                mean_ns: t.mean_ns,
                min_ns: t.min_ns,
                mults: tally.mults,
                adds: tally.adds,
                mult_ratio_vs_direct: tally.mults as f64 / direct.mults as f64,
                mult_ratio_vs_two_factor: tally.mults as f64 / two_factor.mults as f64,
                bound_ratio: tally.mults as f64 / (2 * (n - 1)) as f64,
                time_ratio_vs_direct: None,
            });
        }
        if let Some(d) = direct_mean {
            for row in &mut rows[first..] {
                row.time_ratio_vs_direct = Some(row.mean_ns / d);
            }
        }
    }
    Ok(BenchReport { rows, failures })
}

pub fn render(report: &BenchReport, format: Format) -> anyhow::Result<String> {
    let time_ratio = |r: &BenchRow| {
        r.time_ratio_vs_direct
            .map(|t| format!("{t:.3}"))
            .unwrap_or_default()
    };
    let mut out = match format {
        Format::Json => return Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "n",
                "engine",
                "trials",
                "mean_ns",
                "min_ns",
                "mults",
                "adds",
                "mult_ratio_vs_direct",
                "mult_ratio_vs_two_factor",
                "bound_ratio",
                "time_ratio_vs_direct",
            ])?;
            for r in &report.rows {
                w.write_record([
                    r.n.to_string(),
                    r.engine.clone(),
                    r.trials.to_string(),
                    format!("{:.0}", r.mean_ns),
                    format!("{:.0}", r.min_ns),
                    r.mults.to_string(),
                    r.adds.to_string(),
                    format!("{:.4}", r.mult_ratio_vs_direct),
                    format!("{:.4}", r.mult_ratio_vs_two_factor),
                    format!("{:.2}", r.bound_ratio),
                    time_ratio(r),
                ])?;
            }
            return Ok(String::from_utf8(w.into_inner()?)?);
        }
        Format::Markdown => String::from(
            "| n | engine | trials | mean ns | min ns | M | A | M/M direct | M/M two-factor | M/2(n-1) | time/time direct |\n\
             |---|---|---|---|---|---|---|---|---|---|---|\n",
        ),
    };
    for r in &report.rows {
        out.push_str(&format!(
            "| {} | {} | {} | {:.0} | {:.0} | {} | {} | {:.4} | {:.4} | {:.2} | {} |\n",
            r.n,
            r.engine,
            r.trials,
            r.mean_ns,
            r.min_ns,
            r.mults,
            r.adds,
            r.mult_ratio_vs_direct,
            r.mult_ratio_vs_two_factor,
            r.bound_ratio,
            time_ratio(r),
        ));
    }
    out.push('\n');
    if report.failures.is_empty() {
        out.push_str("count ratios: ok\n");
    } else {
        for f in &report.failures {
            out.push_str(&format!("count ratio FAILED: {f}\n"));
        }
    }
    out.push_str("timings are informational and hardware dependent\n");
    Ok(out)
}
