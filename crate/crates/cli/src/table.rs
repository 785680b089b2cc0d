//! Operation-count table: measured tallies next to the closed forms and
//! quoted reference values.

use anyhow::bail;
use primeconv::parallel::map_indexed;
use primeconv::sample::{real_signal, stream_rng};
use primeconv::{direct_cyclic_convolution, rel_error, Engine, FastPlan, OpTally, Signal};
use serde::Serialize;

use crate::{bench, predicted_tally, sci, BenchConfig, Format};

pub const DEFAULT_SIZES: [usize; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// Published `(M, A)` for the fast algorithm, quoted verbatim.
const QUOTED_GENERAL: [(usize, u64, u64); 8] = [
    (3, 4, 10),
    (5, 11, 31),
    (7, 22, 64),
    (11, 56, 166),
    (13, 79, 235),
    (17, 137, 409),
    (19, 172, 514),
    (23, 254, 760),
];

/// Published `(M, A)` for direct evaluation, quoted verbatim. The n = 17 row
/// does not match n^2 / n(n-1).
const QUOTED_DIRECT: [(usize, u64, u64); 8] = [
    (3, 9, 6),
    (5, 25, 20),
    (7, 49, 42),
    (11, 121, 110),
    (13, 169, 156),
    (17, 189, 172),
    (19, 361, 342),
    (23, 529, 506),
];

/// Best known short-convolution algorithms from the literature, quoted.
const QUOTED_BEST: [(usize, u64, u64); 3] = [(3, 4, 11), (5, 8, 62), (7, 16, 70)];

fn lookup(table: &[(usize, u64, u64)], n: usize) -> Option<(u64, u64)> {
    table.iter().find(|r| r.0 == n).map(|r| (r.1, r.2))
}

/// Quoted `(M, A)` for an engine at length `n`, if the published table has
/// that row. The two-factor engine has no quoted column.
pub fn quoted(engine: Engine, n: usize) -> Option<(u64, u64)> {
    match engine {
        Engine::FastPrime => lookup(&QUOTED_GENERAL, n),
        Engine::Direct => lookup(&QUOTED_DIRECT, n),
        Engine::WinogradTwoFactor => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub engine: String,
    pub mults_measured: u64,
    pub adds_measured: u64,
    pub mults_predicted: u64,
    pub adds_predicted: u64,
    /// `2(n-1)`.
    pub lower_bound: u64,
    /// `mults_measured / lower_bound`.
    pub bound_ratio: f64,
    pub max_rel_err_vs_oracle: f64,
    pub mean_wallclock_ns: Option<f64>,
    pub quoted_mults: Option<u64>,
    pub quoted_adds: Option<u64>,
    pub literature_best_mults: Option<u64>,
    pub literature_best_adds: Option<u64>,
    pub notes: Vec<String>,
}

fn measure_row(
    cfg: &BenchConfig,
    index: usize,
    n: usize,
    engine: Engine,
) -> anyhow::Result<TableRow> {
    let mut rng = stream_rng(cfg.seed, index as u64);
    let mut tally: Option<OpTally> = None;
    let mut worst = 0.0f64;
    for _ in 0..cfg.trials {
        let b = real_signal(&mut rng, n);
        let z = real_signal(&mut rng, n);
        let mut t = OpTally::default();
        let out = engine.prepare(&b)?.execute(&z, &mut t)?;
        let oracle = direct_cyclic_convolution(&b, &z, &mut OpTally::default())?;
        worst = worst.max(rel_error(&out, &oracle));
        match tally {
            None => tally = Some(t),
            Some(prev) if prev != t => bail!("{engine} at n = {n}: tally depends on the data"),
            Some(_) => {}
        }
    }
    let measured = tally.expect("trials >= 1");
    let predicted = predicted_tally(engine, n)?;
    let lower_bound = 2 * (n as u64 - 1);

    let quoted = quoted(engine, n);
    let best = lookup(&QUOTED_BEST, n);

    let mut notes = Vec::new();
    if engine == Engine::FastPrime && measured.adds != predicted.adds {
        notes.push(format!(
            "published addition formula is {} short of the executed schedule",
            measured.adds as i64 - predicted.adds as i64
        ));
    }
    if let Some((qm, qa)) = quoted {
        if (qm, qa) != (predicted.mults, predicted.adds) {
            notes.push(format!(
                "quoted row {qm}/{qa} disagrees with the formula {}/{}",
                predicted.mults, predicted.adds
            ));
        }
    }
    if engine == Engine::FastPrime {
        let plan = FastPlan::new(&Signal::<f64>::ones(n)?)?;
        notes.extend(plan.advisory());
    }

    Ok(TableRow {
        n,
        engine: engine.name().to_string(),
        mults_measured: measured.mults,
        adds_measured: measured.adds,
        mults_predicted: predicted.mults,
        adds_predicted: predicted.adds,
        lower_bound,
        bound_ratio: measured.mults as f64 / lower_bound as f64,
        max_rel_err_vs_oracle: worst,
        mean_wallclock_ns: None,
        quoted_mults: quoted.map(|q| q.0),
        quoted_adds: quoted.map(|q| q.1),
        literature_best_mults: best.map(|q| q.0),
        literature_best_adds: best.map(|q| q.1),
        notes,
    })
}

/// One row per `(n, engine)`, sizes outermost. Counts and errors are
/// computed in parallel; timings, when enabled, run afterwards one row at
/// a time so workers do not compete for cores.
pub fn cmd_table(cfg: &BenchConfig) -> anyhow::Result<Vec<TableRow>> {
    if cfg.sizes.is_empty() {
        bail!("no sizes given");
    }
    let work: Vec<(usize, Engine)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| cfg.engines.iter().map(move |&e| (n, e)))
        .collect();
    let mut rows = map_indexed(&work, |i, &(n, e)| measure_row(cfg, i, n, e))
        .into_iter()
        .collect::<anyhow::Result<Vec<_>>>()?;
    if cfg.timing {
        for (i, row) in rows.iter_mut().enumerate() {
            let (n, engine) = work[i];
            let timing = bench::time_engine(engine, n, cfg.trials, cfg.seed, i as u64)?;
            row.mean_wallclock_ns = Some(timing.mean_ns);
        }
    }
    Ok(rows)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn pair(m: Option<u64>, a: Option<u64>) -> String {
    match (m, a) {
        (Some(m), Some(a)) => format!("{m}/{a}"),
        _ => String::new(),
    }
}

const LEGEND: &str = "quoted and literature columns are copied reference values, not measurements";

pub fn render(rows: &[TableRow], format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "n",
                "engine",
                "mults_measured",
                "adds_measured",
                "mults_predicted",
                "adds_predicted",
                "lower_bound",
                "bound_ratio",
                "max_rel_err_vs_oracle",
                "mean_wallclock_ns",
                "quoted_mults",
                "quoted_adds",
                "literature_best_mults",
                "literature_best_adds",
                "notes",
            ])?;
            for r in rows {
                w.write_record([
                    r.n.to_string(),
                    r.engine.clone(),
                    r.mults_measured.to_string(),
                    r.adds_measured.to_string(),
                    r.mults_predicted.to_string(),
                    r.adds_predicted.to_string(),
                    r.lower_bound.to_string(),
                    format!("{:.4}", r.bound_ratio),
                    sci(r.max_rel_err_vs_oracle),
                    opt(r.mean_wallclock_ns.map(|t| format!("{t:.0}"))),
                    opt(r.quoted_mults),
                    opt(r.quoted_adds),
                    opt(r.literature_best_mults),
                    opt(r.literature_best_adds),
                    r.notes.join("; "),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Markdown => {
            let mut out = String::from(
                "| n | engine | M | A | M formula | A formula | 2(n-1) | M/2(n-1) | max rel err | mean ns | quoted M/A | literature best M/A | notes |\n\
                 |---|---|---|---|---|---|---|---|---|---|---|---|---|\n",
            );
            for r in rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} | {:.4} | {} | {} | {} | {} | {} |\n",
                    r.n,
                    r.engine,
                    r.mults_measured,
                    r.adds_measured,
                    r.mults_predicted,
                    r.adds_predicted,
                    r.lower_bound,
                    r.bound_ratio,
                    sci(r.max_rel_err_vs_oracle),
                    opt(r.mean_wallclock_ns.map(|t| format!("{t:.0}"))),
                    pair(r.quoted_mults, r.quoted_adds),
                    pair(r.literature_best_mults, r.literature_best_adds),
                    r.notes.join("; "),
                ));
            }
            out.push_str(&format!("\n{LEGEND}\n"));
            Ok(out)
        }
    }
}
