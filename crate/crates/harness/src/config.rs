//! Run configuration shared by the CLI and the suite runner.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use zerolab_core::arithmetic::{classify_argument, RationalArgument};
use zerolab_core::formulas::{PrimePowerCofactor, DEFAULT_C_UNC, DEFAULT_PAIR_THRESHOLD};
use zerolab_core::statistics::Weighting;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZerosCommand {
    Compute,
    Import,
    Export,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyKind {
    Landau,
    Isolation,
    LogLandau,
    FejerLemma,
    Mellin,
    Theorem1,
    Theorem2,
    Gonek,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsKind {
    PairCorr,
    Simple,
    Gaps,
    Census,
    Histogram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Zeros(ZerosCommand),
    Verify(VerifyKind),
    Stats(StatsKind),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Zeros(ZerosCommand::Compute) => "zeros.compute",
            Command::Zeros(ZerosCommand::Import) => "zeros.import",
            Command::Zeros(ZerosCommand::Export) => "zeros.export",
            Command::Verify(VerifyKind::Landau) => "landau",
            Command::Verify(VerifyKind::Isolation) => "isolation",
            Command::Verify(VerifyKind::LogLandau) => "log-landau",
            Command::Verify(VerifyKind::FejerLemma) => "fejer-lemma",
            Command::Verify(VerifyKind::Mellin) => "mellin",
            Command::Verify(VerifyKind::Theorem1) => "theorem1",
            Command::Verify(VerifyKind::Theorem2) => "theorem2",
            Command::Verify(VerifyKind::Gonek) => "gonek",
            Command::Stats(StatsKind::PairCorr) => "paircorr",
            Command::Stats(StatsKind::Simple) => "simple",
            Command::Stats(StatsKind::Gaps) => "gaps",
            Command::Stats(StatsKind::Census) => "census",
            Command::Stats(StatsKind::Histogram) => "histogram",
        }
    }
}

/// An `--x` value: a rational `R/S`, an integer, a decimal or `sqrt(N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XArg {
    pub value: f64,
    pub rational: Option<(u64, u64)>,
}

impl XArg {
    pub fn rational(r: u64, s: u64) -> Self {
        XArg {
            value: r as f64 / s as f64,
            rational: Some((r, s)),
        }
    }

    pub fn real(value: f64) -> Self {
        XArg { value, rational: None }
    }

    /// The classified rational, or a usage error for irrational input.
    pub fn classified(&self) -> Result<RationalArgument> {
        let (r, s) = self
            .rational
            .ok_or_else(|| HarnessError::Usage(format!("x = {self} must be a rational R/S here")))?;
        Ok(classify_argument(r, s)?)
    }
}

impl fmt::Display for XArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rational {
            Some((r, 1)) => write!(f, "{r}"),
            Some((r, s)) => write!(f, "{r}/{s}"),
            None => write!(f, "{}", self.value),
        }
    }
}

impl FromStr for XArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let positive = |v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(format!("x = {s} must be positive"))
            }
        };
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let n: f64 = inner.parse().map_err(|_| format!("bad radicand in {s}"))?;
            return Ok(XArg::real(positive(n)?.sqrt()));
        }
        if let Some((r, q)) = s.split_once('/') {
            let r: u64 = r.trim().parse().map_err(|_| format!("bad numerator in {s}"))?;
            let q: u64 = q.trim().parse().map_err(|_| format!("bad denominator in {s}"))?;
            if r == 0 || q == 0 {
                return Err(format!("x = {s} must be a positive rational"));
            }
            return Ok(XArg::rational(r, q));
        }
        if let Ok(n) = s.parse::<u64>() {
            if n == 0 {
                return Err("x must be positive".to_string());
            }
            return Ok(XArg::rational(n, 1));
        }
        let v: f64 = s.parse().map_err(|_| format!("cannot read x = {s}"))?;
        Ok(XArg::real(positive(v)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZeroSourceConfig {
    /// Computed on demand, held in memory.
    Compute,
    /// A zero table used as a persistent cache: loaded, extended by
    /// computation when a task needs more height, and written back.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute tolerance of the Mellin line-integral oracles.
    pub quadrature: f64,
    /// Relative weight below which pairs are dropped from double sums.
    pub truncation: f64,
    /// Slack for `O(1)` terms of the asymptotic identities.
    pub c_unc: f64,
    /// Largest relative gap accepted by the pair-correlation trend check.
    pub trend: f64,
    /// Smallest simple-zero fraction bound accepted.
    pub simple: f64,
    /// Largest closed-form versus oracle difference accepted.
    pub mellin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quadrature: 1e-10,
            truncation: DEFAULT_PAIR_THRESHOLD,
            c_unc: DEFAULT_C_UNC,
            trend: 0.10,
            simple: 0.60,
            mellin: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub t_list: Vec<f64>,
    pub alpha_list: Vec<f64>,
    pub x_list: Vec<XArg>,
    pub eps: Option<f64>,
    pub zero_source: ZeroSourceConfig,
    pub sieve_limit: Option<u64>,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub theorem1_m: PrimePowerCofactor,
    pub weighting: Weighting,
    /// Upper height for `zeros compute`.
    pub t_max: Option<f64>,
    /// Input table for `zeros import`.
    pub input: Option<PathBuf>,
    pub bin_width: f64,
    pub max_range: f64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            t_list: Vec::new(),
            alpha_list: Vec::new(),
            x_list: Vec::new(),
            eps: None,
            zero_source: ZeroSourceConfig::Compute,
            sieve_limit: None,
            tolerances: Tolerances::default(),
            out: None,
            format: OutputFormat::Json,
            theorem1_m: PrimePowerCofactor::Power,
            weighting: Weighting::Gaussian,
            t_max: None,
            input: None,
            bin_width: 0.1,
            max_range: 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol = &self.tolerances;
        for (name, v) in [
            ("quadrature", tol.quadrature),
            ("truncation", tol.truncation),
            ("c_unc", tol.c_unc),
            ("trend", tol.trend),
            ("simple", tol.simple),
            ("mellin", tol.mellin),
        ] {
            if !(v > 0.0) {
                return Err(HarnessError::Usage(format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        if tol.truncation >= 1.0 {
            return Err(HarnessError::Usage("truncation threshold must be below 1".to_string()));
        }
        if self.t_list.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(HarnessError::Usage("--T values must be strictly ascending".to_string()));
        }
        if self.t_list.iter().any(|t| !(*t > 2.0 * std::f64::consts::PI)) {
            return Err(HarnessError::Usage("--T values must exceed 2π".to_string()));
        }
        if self.alpha_list.iter().any(|a| !(*a > 0.0)) {
            return Err(HarnessError::Usage("--alpha values must be positive".to_string()));
        }
        if let Some(e) = self.eps {
            if !(e > 0.0) {
                return Err(HarnessError::Usage(format!("--eps must be positive, got {e}")));
            }
        }
        Ok(())
    }
}
