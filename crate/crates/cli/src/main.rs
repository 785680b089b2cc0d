use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use primeconv::{Engine, Padding};
use primeconv_cli::io::{format_samples, read_samples};
use primeconv_cli::transform::{cmd_convolve, cmd_dft, ConvolveOptions};
use primeconv_cli::{bench, parse_engines, parse_sizes, table, verify, BenchConfig, Format};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "primeconv",
    version,
    about = "Fast prime-length cyclic convolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SweepArgs {
    /// Lengths, e.g. "3,5,7" or "2-32,53"
    #[arg(long)]
    sizes: Option<String>,
    /// Comma-separated engines: direct, fast-prime, winograd-two-factor
    #[arg(long)]
    engine: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Relative error bound; replaces every per-suite default
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PaddingArg {
    /// Smallest prime >= 2n-1
    Prime,
    /// 2n
    Double,
}

#[derive(Subcommand)]
enum Command {
    /// Measured operation counts per length and engine
    Table {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Skip wall-clock measurement
        #[arg(long)]
        no_timing: bool,
    },
    /// Run every verification suite; exits 1 on any failure
    Verify {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, hide = true, allow_negative_numbers = true)]
        inject_fault: Option<f64>,
    },
    /// Wall-clock timings and multiplication-count ratios
    Bench {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Cyclic (or linear) convolution of two sample files
    Convolve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        kernel: PathBuf,
        #[arg(long, default_value = "fast-prime")]
        engine: Engine,
        #[arg(long)]
        linear: bool,
        /// With --linear, write all 2n-1 samples
        #[arg(long, requires = "linear")]
        full: bool,
        #[arg(long, value_enum, default_value = "prime")]
        padding: PaddingArg,
        #[arg(long)]
        require_prime: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prime-length DFT of a sample file
    Dft {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "fast-prime")]
        engine: Engine,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config(sweep: &SweepArgs, sizes: Vec<usize>, trials: usize) -> anyhow::Result<BenchConfig> {
    let sizes = match &sweep.sizes {
        Some(s) => parse_sizes(s)?,
        None => sizes,
    };
    let engines = match &sweep.engine {
        Some(e) => parse_engines(e)?,
        None => Engine::ALL.to_vec(),
    };
    let trials = sweep.trials.unwrap_or(trials);
    if trials == 0 {
        bail!("--trials must be positive");
    }
    if let Some(t) = sweep.tol {
        if !(t >= 0.0 && t.is_finite()) {
            bail!("--tol must be a finite non-negative number, got {t}");
        }
    }
    Ok(BenchConfig {
        sizes,
        engines,
        trials,
        seed: sweep.seed,
        tolerance: sweep.tol,
        format: sweep.format,
        ..BenchConfig::default()
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Returns whether every check passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Table { sweep, no_timing } => {
            let mut cfg = config(&sweep, table::DEFAULT_SIZES.to_vec(), 100)?;
            cfg.timing = !no_timing;
            let rows = table::cmd_table(&cfg)?;
            emit(&table::render(&rows, cfg.format)?, sweep.out.as_ref())?;
            Ok(true)
        }
        Command::Verify {
            sweep,
            inject_fault,
        } => {
            let mut cfg = config(&sweep, verify::default_sizes(), 100)?;
            cfg.fault = inject_fault;
            let report = verify::cmd_verify(&cfg);
            emit(&verify::render(&report, cfg.format)?, sweep.out.as_ref())?;
            Ok(report.passed())
        }
        Command::Bench { sweep } => {
            let cfg = config(&sweep, bench::DEFAULT_SIZES.to_vec(), bench::DEFAULT_TRIALS)?;
            let report = bench::cmd_bench(&cfg)?;
            emit(&bench::render(&report, cfg.format)?, sweep.out.as_ref())?;
            Ok(report.passed())
        }
        Command::Convolve {
            input,
            kernel,
            engine,
            linear,
            full,
            padding,
            require_prime,
            out,
        } => {
            let opts = ConvolveOptions {
                engine,
                linear,
                full,
                padding: match padding {
                    PaddingArg::Prime => Padding::SmallestPrime,
                    PaddingArg::Double => Padding::Double,
                },
                require_prime,
            };
            let result = cmd_convolve(&read_samples(&input)?, &read_samples(&kernel)?, &opts)?;
            emit(&format_samples(&result), out.as_ref())?;
            Ok(true)
        }
        Command::Dft { input, engine, out } => {
            let result = cmd_dft(&read_samples(&input)?, engine)?;
            emit(&format_samples(&result), out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
