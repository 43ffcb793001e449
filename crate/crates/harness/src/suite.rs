//! Expands a [`RunConfig`] into tasks and runs them against one zero cache.

use std::time::Instant;

use log::warn;
use serde_json::{json, Map, Value};
use zerolab_core::arithmetic::{set_sieve_cap, ArgumentClass};
use zerolab_core::formulas::{
    fejer_landau_sides, fejer_sum_height, gonek_sharp_sum, isolation_sides, landau_sides, log_weighted_landau_sides,
    theorem1_sides, theorem2_sides, SidePair, TheoremParams,
};
use zerolab_core::kernels::{
    fejer_mellin_closed, fejer_mellin_oracle, gaussian_mellin_closed, gaussian_mellin_oracle, FejerWindow,
    GaussianWindow, IsolationWindow, MellinVariant,
};
use zerolab_core::statistics::{
    gap_report, histogram_mass, offline_census, pair_histogram, simple_zero_bound, sine_kernel_statistic, HistogramRow,
    Weighting, GAP_THRESHOLD, SINE_SUM_THRESHOLD,
};
use zerolab_core::zeta::ZeroSet;
use zerolab_core::Complex64;

use crate::cache::ZeroCache;
use crate::config::{Command, RunConfig, StatsKind, VerifyKind, XArg};
use crate::error::{HarnessError, Result};
use crate::report::{Report, Verdict};

/// Abscissa of the Mellin oracles' integration line.
const ORACLE_ABSCISSA: f64 = 1.5;
/// Height of the Fejér centre used by the Mellin grid.
const MELLIN_FEJER_HEIGHT: f64 = 20.0;
const DEFAULT_CENSUS_EPS: f64 = 0.1;
const DEFAULT_THEOREM_EPS: f64 = 1.0;

/// Reports plus any tables produced along the way.
#[derive(Debug, Clone, Default)]
pub struct SuiteOutput {
    pub reports: Vec<Report>,
    /// `(name, rows)` for each histogram task.
    pub histograms: Vec<(String, Vec<HistogramRow>)>,
}

struct Defaults {
    t: &'static [f64],
    alpha: &'static [f64],
    x: &'static [(u64, u64)],
}

fn defaults(command: Command) -> Defaults {
    use StatsKind as S;
    use VerifyKind as V;
    let (t, alpha, x): (&[f64], &[f64], &[(u64, u64)]) = match command {
        Command::Verify(V::Landau) => (&[200.0], &[0.5], &[(2, 1)]),
        Command::Verify(V::Isolation) => (&[200.0], &[0.5], &[(2, 1)]),
        Command::Verify(V::LogLandau) => (&[500.0], &[0.5], &[(4, 1)]),
        Command::Verify(V::FejerLemma) => (&[1000.0], &[0.5], &[(1, 1), (2, 1)]),
        Command::Verify(V::Mellin) => (&[100.0], &[0.5], &[]),
        Command::Verify(V::Theorem1) | Command::Verify(V::Theorem2) => (&[1000.0], &[0.5], &[(1, 1)]),
        Command::Verify(V::Gonek) => (&[1000.0], &[0.5], &[(4, 1)]),
        Command::Stats(S::PairCorr) => (&[2000.0], &[0.5], &[]),
        Command::Stats(S::Simple) => (&[2000.0], &[1.0], &[]),
        Command::Stats(S::Gaps) | Command::Stats(S::Histogram) => (&[2000.0], &[1.0], &[]),
        Command::Stats(S::Census) => (&[200.0], &[1.0], &[]),
        Command::Zeros(_) => (&[], &[], &[]),
    };
    Defaults { t, alpha, x }
}

fn or_default<T: Clone>(given: &[T], fallback: impl IntoIterator<Item = T>) -> Vec<T> {
    if given.is_empty() {
        fallback.into_iter().collect()
    } else {
        given.to_vec()
    }
}

/// The zero of the set nearest to `t`.
fn nearest_zero(zeros: &ZeroSet, t: f64) -> Option<Complex64> {
    zeros
        .records()
        .iter()
        .min_by(|a, b| (a.ordinate - t).abs().total_cmp(&(b.ordinate - t).abs()))
        .map(|r| r.rho())
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| ((*k).to_string(), v.clone())).collect()
}

struct Runner<'a> {
    config: &'a RunConfig,
    cache: &'a mut ZeroCache,
    out: SuiteOutput,
}

impl Runner<'_> {
    fn task_id(&self) -> String {
        format!("{}:{:03}", self.config.command.name(), self.out.reports.len())
    }

    fn attribute<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            HarnessError::Core(source) => HarnessError::Task {
                task: self.task_id(),
                source,
            },
            other => other,
        })
    }

    fn push(&mut self, mut report: Report, started: Instant) {
        report.runtime_ms = started.elapsed().as_millis() as u64;
        self.out.reports.push(report);
    }

    fn sides(
        &mut self,
        p: Map<String, Value>,
        min_height: f64,
        f: impl Fn(&ZeroSet) -> zerolab_core::Result<SidePair>,
    ) -> Result<()> {
        let started = Instant::now();
        let s = self.cache.with_zeros(min_height, f);
        let s = self.attribute(s)?;
        let id = self.task_id();
        self.push(Report::from_sides(id, p, &s), started);
        Ok(())
    }

    fn theorem_params(&self, t: f64, alpha: f64, x: &XArg) -> Result<TheoremParams> {
        let eps = self.config.eps.unwrap_or(DEFAULT_THEOREM_EPS);
        let mut p = TheoremParams::new(t, alpha, eps, x.classified()?)?;
        p.c_unc = self.config.tolerances.c_unc;
        p.threshold = self.config.tolerances.truncation;
        p.cofactor = self.config.theorem1_m;
        Ok(p)
    }

    fn run(&mut self) -> Result<()> {
        let cfg = self.config;
        let d = defaults(cfg.command);
        let ts = or_default(&cfg.t_list, d.t.iter().copied());
        let alphas = or_default(&cfg.alpha_list, d.alpha.iter().copied());
        let xs = or_default(&cfg.x_list, d.x.iter().map(|&(r, s)| XArg::rational(r, s)));
        match cfg.command {
            Command::Zeros(_) => {
                return Err(HarnessError::Usage("zeros commands do not produce reports".to_string()));
            }
            Command::Verify(kind) => {
                for &t in &ts {
                    self.verify(kind, t, &alphas, &xs)?;
                }
            }
            Command::Stats(kind) => {
                for &t in &ts {
                    self.stats(kind, t, &alphas)?;
                }
            }
        }
        Ok(())
    }

    fn verify(&mut self, kind: VerifyKind, t: f64, alphas: &[f64], xs: &[XArg]) -> Result<()> {
        match kind {
            VerifyKind::Landau => {
                let win = GaussianWindow::standard(t)?;
                for x in xs {
                    let p = params(&[
                        ("T", json!(t)),
                        ("delta", json!(win.delta())),
                        ("x", json!(x.to_string())),
                    ]);
                    let xv = x.value;
                    self.sides(p, t + 8.0 * win.delta(), |z| landau_sides(xv, &win, z))?;
                }
            }
            VerifyKind::LogLandau => {
                let win = GaussianWindow::standard(t)?;
                for x in xs {
                    let p = params(&[
                        ("T", json!(t)),
                        ("delta", json!(win.delta())),
                        ("x", json!(x.to_string())),
                    ]);
                    let xv = x.value;
                    self.sides(p, t + 8.0 * win.delta(), |z| log_weighted_landau_sides(xv, &win, z))?;
                }
            }
            VerifyKind::Isolation => {
                for &alpha in alphas {
                    let m = alpha * t.ln().sqrt();
                    for x in xs {
                        let rho = self.center(t)?;
                        let win = IsolationWindow::new(rho, m)?;
                        let p = params(&[
                            ("T", json!(t)),
                            ("alpha", json!(alpha)),
                            ("M", json!(m)),
                            ("gamma", json!(rho.im)),
                            ("x", json!(x.to_string())),
                        ]);
                        let xv = x.value;
                        self.sides(p, rho.im + 8.0 / m, |z| isolation_sides(xv, &win, z))?;
                    }
                }
            }
            VerifyKind::FejerLemma => {
                for &alpha in alphas {
                    let rho = self.center(t)?;
                    let win = FejerWindow::new(rho, alpha, t)?;
                    for x in xs {
                        let p = params(&[
                            ("T", json!(t)),
                            ("alpha", json!(alpha)),
                            ("Q", json!(win.q())),
                            ("gamma", json!(rho.im)),
                            ("x", json!(x.to_string())),
                        ]);
                        let xv = x.value;
                        let h = fejer_sum_height(rho);
                        self.sides(p, h, |z| fejer_landau_sides(xv, &win, z))?;
                    }
                }
            }
            VerifyKind::Mellin => {
                for &alpha in alphas {
                    self.mellin(t, alpha)?;
                }
            }
            VerifyKind::Theorem1 | VerifyKind::Theorem2 => {
                for &alpha in alphas {
                    for x in xs {
                        let tp = self.theorem_params(t, alpha, x)?;
                        let warnings = if kind == VerifyKind::Theorem1 {
                            tp.theorem1_warnings()
                        } else {
                            tp.theorem2_warnings()
                        };
                        for w in &warnings {
                            warn!("T = {t}, α = {alpha}, x = {x}: {w}");
                        }
                        let mut p = params(&[
                            ("T", json!(t)),
                            ("alpha", json!(alpha)),
                            ("eps", json!(tp.eps)),
                            ("x", json!(x.to_string())),
                            ("M", json!(tp.m())),
                            ("c_unc", json!(tp.c_unc)),
                            ("threshold", json!(tp.threshold)),
                        ]);
                        if kind == VerifyKind::Theorem1 {
                            let m = match tp.cofactor {
                                zerolab_core::formulas::PrimePowerCofactor::Power => "pi",
                                zerolab_core::formulas::PrimePowerCofactor::SquaredPower => "p2i",
                            };
                            p.insert("theorem1_m".into(), json!(m));
                        }
                        p.insert("hypothesis_warnings".into(), json!(warnings));
                        let started = Instant::now();
                        let s = if kind == VerifyKind::Theorem1 {
                            self.cache.with_zeros(t, |z| theorem1_sides(&tp, z))
                        } else {
                            self.cache.with_zeros(t, |z| theorem2_sides(&tp, z))
                        };
                        let s = self.attribute(s)?;
                        let mut report = Report::from_sides(self.task_id(), p, &s);
                        // only x = 1 carries an explicit O(1) slack to test against
                        if tp.x.class != ArgumentClass::One {
                            report.verdict = Verdict::Informational;
                        }
                        self.push(report, started);
                    }
                }
            }
            VerifyKind::Gonek => {
                for x in xs {
                    let p = params(&[("T", json!(t)), ("x", json!(x.to_string()))]);
                    let xv = x.value;
                    self.sides(p, t, |z| gonek_sharp_sum(xv, t, z))?;
                }
            }
        }
        Ok(())
    }

    fn center(&mut self, t: f64) -> Result<Complex64> {
        let height = t + 10.0;
        let set = self.cache.ensure(height)?;
        nearest_zero(set, t).ok_or_else(|| HarnessError::Usage(format!("no zero near T = {t}")))
    }

    /// Worst closed-form versus oracle difference over a grid that crosses
    /// every breakpoint of the Fejér transform.
    fn mellin(&mut self, t: f64, alpha: f64) -> Result<()> {
        let started = Instant::now();
        let tol = self.config.tolerances.quadrature;
        let gauss = GaussianWindow::standard(t)?;
        let fejer = FejerWindow::new(Complex64::new(0.5, MELLIN_FEJER_HEIGHT), alpha, t)?;
        let q = fejer.q();
        let mut worst = (0.0, Complex64::default(), Complex64::default());
        let mut points = 0u64;
        let mut consider = |closed: Complex64, oracle: Complex64| {
            points += 1;
            let e = (closed - oracle).norm();
            if e >= worst.0 {
                worst = (e, closed, oracle);
            }
        };
        for (x, v) in [
            (0.5, MellinVariant::Direct),
            (1.0, MellinVariant::Direct),
            (2.0, MellinVariant::Direct),
            (2.0, MellinVariant::Reflected),
        ] {
            let closed = gaussian_mellin_closed(&gauss, x, v)?;
            let oracle = gaussian_mellin_oracle(&gauss, x, v, ORACLE_ABSCISSA, tol)?;
            consider(closed, oracle.value);
        }
        let grid = [
            (0.5 / q, MellinVariant::Direct),
            (0.9 / q, MellinVariant::Direct),
            (1.0 / q, MellinVariant::Direct),
            (1.1 / q, MellinVariant::Direct),
            (0.5, MellinVariant::Direct),
            (0.95, MellinVariant::Direct),
            (1.0, MellinVariant::Direct),
            (1.05, MellinVariant::Direct),
            (0.9 * q, MellinVariant::Direct),
            (q, MellinVariant::Direct),
            (1.1 * q, MellinVariant::Direct),
            (2.0 * q, MellinVariant::Direct),
            (0.95, MellinVariant::Reflected),
            (1.05, MellinVariant::Reflected),
            (0.3, MellinVariant::Reflected),
            (0.7 * q, MellinVariant::Reflected),
        ];
        for (y, v) in grid {
            let closed = fejer_mellin_closed(&fejer, y, v)?;
            let oracle = fejer_mellin_oracle(&fejer, y, v, ORACLE_ABSCISSA, tol)?;
            consider(closed, oracle.value);
        }
        let p = params(&[
            ("T", json!(t)),
            ("alpha", json!(alpha)),
            ("delta", json!(gauss.delta())),
            ("Q", json!(q)),
            ("grid_points", json!(points)),
            ("oracle_tolerance", json!(tol)),
        ]);
        let mut report = Report::new(self.task_id(), p, worst.1, worst.2);
        report.uncertainty_envelope = self.config.tolerances.mellin;
        report.terms_used = points;
        report.verdict = report.budget_verdict();
        self.push(report, started);
        Ok(())
    }

    fn stats(&mut self, kind: StatsKind, t: f64, alphas: &[f64]) -> Result<()> {
        let tol = self.config.tolerances;
        match kind {
            StatsKind::PairCorr => {
                let weighting = self.config.weighting;
                for &alpha in alphas {
                    let started = Instant::now();
                    let r = self
                        .cache
                        .with_zeros(t, |z| sine_kernel_statistic(t, alpha, z, weighting));
                    let r = self.attribute(r)?;
                    let name = match weighting {
                        Weighting::Sharp => "sharp",
                        Weighting::Gaussian => "gaussian",
                    };
                    let p = params(&[("T", json!(t)), ("alpha", json!(alpha)), ("weighting", json!(name))]);
                    let mut report = Report::new(
                        self.task_id(),
                        p,
                        Complex64::new(r.statistic, 0.0),
                        Complex64::new(r.predicted, 0.0),
                    );
                    report.uncertainty_envelope = tol.trend * r.predicted;
                    report.truncation_budgets.zero_side = r.truncation_bound;
                    report.zeros_used = r.zeros_used as u64;
                    report.verdict = match weighting {
                        Weighting::Gaussian if r.relative_gap <= tol.trend => Verdict::Pass,
                        Weighting::Gaussian => Verdict::Fail,
                        Weighting::Sharp => Verdict::Informational,
                    };
                    self.push(report, started);
                }
            }
            StatsKind::Simple => {
                for &alpha in alphas {
                    let started = Instant::now();
                    let b = self.cache.with_zeros(t, |z| simple_zero_bound(t, alpha, z));
                    let b = self.attribute(b)?;
                    let used = self.cache.ensure(t)?.between(0.0, t).len() as u64;
                    let p = params(&[
                        ("T", json!(t)),
                        ("alpha", json!(alpha)),
                        ("threshold", json!(tol.simple)),
                    ]);
                    let mut report = Report::new(
                        self.task_id(),
                        p,
                        Complex64::new(b, 0.0),
                        Complex64::new(2.0 / 3.0, 0.0),
                    );
                    report.zeros_used = used;
                    report.verdict = if b >= tol.simple { Verdict::Pass } else { Verdict::Fail };
                    self.push(report, started);
                }
            }
            StatsKind::Gaps => {
                let started = Instant::now();
                let g = self.cache.with_zeros(t, |z| gap_report(t, z));
                let g = self.attribute(g)?;
                let used = self.cache.ensure(t)?.between(0.0, t).len() as u64;
                let s = g.per_zero_sine_sums;
                let p = params(&[
                    ("T", json!(t)),
                    ("argmin", json!([g.argmin.0, g.argmin.1])),
                    ("sine_sum_min", json!(s.min)),
                    ("sine_sum_median", json!(s.median)),
                    ("sine_sum_max", json!(s.max)),
                    ("sine_sum_threshold", json!(SINE_SUM_THRESHOLD)),
                    ("lambda_threshold_check", json!(g.lambda_threshold_check)),
                ]);
                let mut report = Report::new(
                    self.task_id(),
                    p,
                    Complex64::new(g.min_normalized_gap, 0.0),
                    Complex64::new(GAP_THRESHOLD, 0.0),
                );
                report.zeros_used = used;
                report.verdict = if g.min_normalized_gap < GAP_THRESHOLD && g.lambda_threshold_check {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                self.push(report, started);
            }
            StatsKind::Census => {
                let started = Instant::now();
                let eps = self.config.eps.unwrap_or(DEFAULT_CENSUS_EPS);
                let set = self.cache.ensure(t)?;
                let c = offline_census(set, eps, t);
                let used = set.len() as u64;
                let boxes: Vec<Value> = c.boxes.iter().map(|((i, m), n)| json!([i, m, n])).collect();
                let p = params(&[
                    ("T", json!(t)),
                    ("eps", json!(eps)),
                    ("boxes", json!(boxes)),
                    ("clustering_flags", json!(c.clustering_flags.len())),
                ]);
                let mut report = Report::new(
                    self.task_id(),
                    p,
                    Complex64::new(c.n_offline as f64, 0.0),
                    Complex64::default(),
                );
                report.zeros_used = used;
                self.push(report, started);
            }
            StatsKind::Histogram => {
                let started = Instant::now();
                let (w, r) = (self.config.bin_width, self.config.max_range);
                let rows = self.cache.with_zeros(t, |z| pair_histogram(t, z, w, r));
                let rows = self.attribute(rows)?;
                let mass = histogram_mass(&rows);
                let p = params(&[("T", json!(t)), ("bin_width", json!(w)), ("max_range", json!(r))]);
                let mut report = Report::new(
                    self.task_id(),
                    p,
                    Complex64::new(mass as f64, 0.0),
                    Complex64::default(),
                );
                report.terms_used = mass;
                self.out.histograms.push((format!("histogram_T{t}"), rows));
                self.push(report, started);
            }
        }
        Ok(())
    }
}

/// Runs every task of `config` against `cache`, in a fixed order.
pub fn run_suite_with(config: &RunConfig, cache: &mut ZeroCache) -> Result<SuiteOutput> {
    config.validate()?;
    if let Some(limit) = config.sieve_limit {
        set_sieve_cap(limit);
    }
    let mut runner = Runner {
        config,
        cache,
        out: SuiteOutput::default(),
    };
    runner.run()?;
    Ok(runner.out)
}

/// Runs a suite with a fresh cache from the configured zero source.
pub fn run_suite(config: &RunConfig) -> Result<Vec<Report>> {
    let mut cache = ZeroCache::new(config.zero_source.clone());
    Ok(run_suite_with(config, &mut cache)?.reports)
}
