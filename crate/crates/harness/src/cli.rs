//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use zerolab_core::formulas::PrimePowerCofactor;
use zerolab_core::statistics::{HistogramRow, Weighting};
use zerolab_core::zeta::{find_zeros, format_zeros, parse_zeros, ZeroSet, MIN_HEIGHT};

use crate::cache::{write_table, ZeroCache};
use crate::config::{Command, OutputFormat, RunConfig, StatsKind, VerifyKind, XArg, ZeroSourceConfig, ZerosCommand};
use crate::error::{HarnessError, Result, EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use crate::report::{to_json, write_csv, Report};
use crate::suite::{run_suite_with, SuiteOutput};

#[derive(Debug, Parser)]
#[command(name = "zerolab", version, about = "Explicit-formula checks over zeta zeros")]
struct Cli {
    #[command(subcommand)]
    group: Group,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Compute, import or export zero tables
    Zeros {
        #[command(subcommand)]
        cmd: ZerosArgs,
    },
    /// Check an explicit-formula identity
    Verify {
        #[arg(value_enum)]
        kind: VerifyArg,
    },
    /// Zero statistics
    Stats {
        #[arg(value_enum)]
        kind: StatsArg,
    },
}

#[derive(Debug, Subcommand)]
enum ZerosArgs {
    /// Locate all zeros up to --t-max
    Compute,
    /// Validate an external zero table and store it in canonical form
    Import {
        /// Table to read
        input: PathBuf,
    },
    /// Write the table given by --zeros-file to --out
    Export,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyArg {
    Landau,
    Isolation,
    LogLandau,
    FejerLemma,
    Mellin,
    Theorem1,
    Theorem2,
    Gonek,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StatsArg {
    Paircorr,
    Simple,
    Gaps,
    Census,
    Histogram,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CofactorArg {
    /// m = p^i
    Pi,
    /// m = p^(2i)
    P2i,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightingArg {
    Sharp,
    Gaussian,
}

#[derive(Debug, Args)]
struct Common {
    /// Heights T, comma separated and ascending
    #[arg(long = "T", global = true, value_delimiter = ',')]
    t: Vec<f64>,
    /// Kernel parameters α, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    alpha: Vec<f64>,
    /// Arguments x: R/S, an integer, a decimal or sqrt(N)
    #[arg(long, global = true, value_delimiter = ',')]
    x: Vec<XArg>,
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Zero table used as a persistent cache
    #[arg(long, global = true)]
    zeros_file: Option<PathBuf>,
    /// Output directory (a file for zero commands); stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,
    /// Upper height for `zeros compute`
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// Largest sieve the prime sums may build
    #[arg(long, global = true)]
    sieve_limit: Option<u64>,
    /// Cofactor m in the prime-power case of the first theorem
    #[arg(long = "theorem1-m", global = true, value_enum, default_value = "pi")]
    theorem1_m: CofactorArg,
    #[arg(long, global = true, value_enum, default_value = "gaussian")]
    weighting: WeightingArg,
    #[arg(long, global = true, default_value_t = 0.1)]
    bin_width: f64,
    #[arg(long, global = true, default_value_t = 3.0)]
    max_range: f64,
    /// Mellin oracle quadrature tolerance
    #[arg(long, global = true)]
    tol_quad: Option<f64>,
    /// Pair-weight truncation threshold for the double sums
    #[arg(long, global = true)]
    tol_trunc: Option<f64>,
    /// Slack for O(1) terms
    #[arg(long, global = true)]
    tol_cunc: Option<f64>,
    /// Relative gap accepted by the pair-correlation check
    #[arg(long, global = true)]
    tol_trend: Option<f64>,
    /// Smallest simple-zero bound accepted
    #[arg(long, global = true)]
    tol_simple: Option<f64>,
    /// Closed form versus oracle difference accepted
    #[arg(long, global = true)]
    tol_mellin: Option<f64>,
}

fn build_config(cli: &Cli) -> RunConfig {
    let command = match &cli.group {
        Group::Zeros { cmd } => Command::Zeros(match cmd {
            ZerosArgs::Compute => ZerosCommand::Compute,
            ZerosArgs::Import { .. } => ZerosCommand::Import,
            ZerosArgs::Export => ZerosCommand::Export,
        }),
        Group::Verify { kind } => Command::Verify(match kind {
            VerifyArg::Landau => VerifyKind::Landau,
            VerifyArg::Isolation => VerifyKind::Isolation,
            VerifyArg::LogLandau => VerifyKind::LogLandau,
            VerifyArg::FejerLemma => VerifyKind::FejerLemma,
            VerifyArg::Mellin => VerifyKind::Mellin,
            VerifyArg::Theorem1 => VerifyKind::Theorem1,
            VerifyArg::Theorem2 => VerifyKind::Theorem2,
            VerifyArg::Gonek => VerifyKind::Gonek,
        }),
        Group::Stats { kind } => Command::Stats(match kind {
            StatsArg::Paircorr => StatsKind::PairCorr,
            StatsArg::Simple => StatsKind::Simple,
            StatsArg::Gaps => StatsKind::Gaps,
            StatsArg::Census => StatsKind::Census,
            StatsArg::Histogram => StatsKind::Histogram,
        }),
    };
    let c = &cli.common;
    let mut cfg = RunConfig::new(command);
    cfg.t_list = c.t.clone();
    cfg.alpha_list = c.alpha.clone();
    cfg.x_list = c.x.clone();
    cfg.eps = c.eps;
    cfg.zero_source = match &c.zeros_file {
        Some(p) => ZeroSourceConfig::File(p.clone()),
        None => ZeroSourceConfig::Compute,
    };
    cfg.sieve_limit = c.sieve_limit;
    let tol = &mut cfg.tolerances;
    for (slot, v) in [
        (&mut tol.quadrature, c.tol_quad),
        (&mut tol.truncation, c.tol_trunc),
        (&mut tol.c_unc, c.tol_cunc),
        (&mut tol.trend, c.tol_trend),
        (&mut tol.simple, c.tol_simple),
        (&mut tol.mellin, c.tol_mellin),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    cfg.out = c.out.clone();
    cfg.format = match c.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Csv => OutputFormat::Csv,
    };
    cfg.theorem1_m = match c.theorem1_m {
        CofactorArg::Pi => PrimePowerCofactor::Power,
        CofactorArg::P2i => PrimePowerCofactor::SquaredPower,
    };
    cfg.weighting = match c.weighting {
        WeightingArg::Sharp => Weighting::Sharp,
        WeightingArg::Gaussian => Weighting::Gaussian,
    };
    cfg.t_max = c.t_max;
    if let Group::Zeros {
        cmd: ZerosArgs::Import { input },
    } = &cli.group
    {
        cfg.input = Some(input.clone());
    }
    cfg.bin_width = c.bin_width;
    cfg.max_range = c.max_range;
    cfg
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

fn emit(path: Option<&Path>, contents: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => std::io::stdout()
            .write_all(contents)
            .map_err(|e| HarnessError::io("stdout", e)),
    }
}

fn zeros_csv(set: &ZeroSet) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["ordinate", "real_part", "multiplicity", "precision"])?;
    for r in set.records() {
        w.write_record([
            r.ordinate.to_string(),
            r.real_part.to_string(),
            r.multiplicity.to_string(),
            r.precision.to_string(),
        ])?;
    }
    w.into_inner()
        .map_err(|e| HarnessError::io("csv output", e.into_error()))
}

fn emit_zeros(cfg: &RunConfig, set: &ZeroSet) -> Result<()> {
    // JSON has no meaning for a zero table; it falls back to the table format
    let bytes = match cfg.format {
        OutputFormat::Csv => zeros_csv(set)?,
        OutputFormat::Json => format_zeros(set).into_bytes(),
    };
    emit(cfg.out.as_deref(), &bytes)
}

fn run_zeros(cfg: &RunConfig, cmd: ZerosCommand) -> Result<()> {
    match cmd {
        ZerosCommand::Compute => {
            let t_max = cfg
                .t_max
                .ok_or_else(|| HarnessError::Usage("zeros compute needs --t-max".to_string()))?;
            let set = match &cfg.zero_source {
                ZeroSourceConfig::File(_) => ZeroCache::new(cfg.zero_source.clone()).ensure(t_max)?.clone(),
                ZeroSourceConfig::Compute => find_zeros(MIN_HEIGHT, t_max)?,
            };
            eprintln!("{} zeros up to {}", set.count_up_to(t_max), set.complete_to());
            emit_zeros(cfg, &set)
        }
        ZerosCommand::Import => {
            let input = cfg.input.as_ref().expect("import carries its input path");
            let text = fs::read_to_string(input).map_err(|e| HarnessError::io(input, e))?;
            let set = parse_zeros(&text)?;
            eprintln!("{} zeros, complete to {}", set.len(), set.complete_to());
            match (&cfg.out, &cfg.zero_source) {
                (None, ZeroSourceConfig::File(cache)) => write_table(&set, cache),
                _ => emit_zeros(cfg, &set),
            }
        }
        ZerosCommand::Export => {
            let ZeroSourceConfig::File(path) = &cfg.zero_source else {
                return Err(HarnessError::Usage("zeros export needs --zeros-file".to_string()));
            };
            let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
            emit_zeros(cfg, &parse_zeros(&text)?)
        }
    }
}

fn histogram_csv(rows: &[HistogramRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bin_lo", "bin_hi", "count", "gue_prediction"])?;
    for r in rows {
        w.write_record([
            r.bin_lo.to_string(),
            r.bin_hi.to_string(),
            r.count.to_string(),
            r.gue_prediction.to_string(),
        ])?;
    }
    w.into_inner()
        .map_err(|e| HarnessError::io("csv output", e.into_error()))
}

const PLOT_STUB: &str = r#"# Plots a pair histogram CSV against the GUE prediction.
# usage: python plot_histogram.py histogram_T2000.csv
import csv
import sys

import matplotlib.pyplot as plt

rows = list(csv.DictReader(open(sys.argv[1])))
lo = [float(r["bin_lo"]) for r in rows]
hi = [float(r["bin_hi"]) for r in rows]
count = [float(r["count"]) for r in rows]
gue = [float(r["gue_prediction"]) for r in rows]
total = sum(count) or 1.0
mass = sum(gue) or 1.0
mid = [(a + b) / 2 for a, b in zip(lo, hi)]
plt.bar(mid, [c / total for c in count], width=[b - a for a, b in zip(lo, hi)], alpha=0.6, label="zeros")
plt.plot(mid, [g / mass for g in gue], "k-", label="1 - sinc^2")
plt.xlabel("normalised gap")
plt.legend()
plt.savefig(sys.argv[1].rsplit(".", 1)[0] + ".png")
"#;

fn reports_bytes(cfg: &RunConfig, reports: &[Report]) -> Result<Vec<u8>> {
    Ok(match cfg.format {
        OutputFormat::Json => to_json(reports)?.into_bytes(),
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(reports, &mut buf)?;
            buf
        }
    })
}

fn write_outputs(cfg: &RunConfig, out: &SuiteOutput) -> Result<()> {
    let bytes = reports_bytes(cfg, &out.reports)?;
    let Some(dir) = &cfg.out else {
        return emit(None, &bytes);
    };
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let name = match cfg.format {
        OutputFormat::Json => "reports.json",
        OutputFormat::Csv => "reports.csv",
    };
    write_file(&dir.join(name), &bytes)?;
    for (stem, rows) in &out.histograms {
        write_file(&dir.join(format!("{stem}.csv")), &histogram_csv(rows)?)?;
    }
    if !out.histograms.is_empty() {
        write_file(&dir.join("plot_histogram.py"), PLOT_STUB.as_bytes())?;
    }
    Ok(())
}

fn execute(cfg: &RunConfig) -> Result<i32> {
    cfg.validate()?;
    if let Command::Zeros(cmd) = cfg.command {
        run_zeros(cfg, cmd)?;
        return Ok(EXIT_OK);
    }
    let mut cache = ZeroCache::new(cfg.zero_source.clone());
    let out = run_suite_with(cfg, &mut cache)?;
    write_outputs(cfg, &out)?;
    let failed = out.reports.iter().filter(|r| r.gated_failure()).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", out.reports.len());
        Ok(EXIT_FAILED)
    } else {
        Ok(EXIT_OK)
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cfg = build_config(&cli);
    match execute(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
