//! Zero statistics built on the kernels: sine-kernel pair correlation
//! (sharp and Gaussian-weighted), the simple-zero fraction bound, gap
//! statistics, an off-line census and a pair histogram.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::formulas::{
    fejer_zero_tail, gaussian_zero_tail, pair_inner_height, points_in, unit_count, DEFAULT_PAIR_THRESHOLD, PAIR_CAP,
};
use crate::kernels::{gaussian_eval, GaussianWindow};
use crate::special::{integrate, sinc, QuadOptions};
use crate::sum::{merge_real, Accumulator};
use crate::zeta::{ZeroPoint, ZeroRecord, ZeroSet};

/// Per-zero sine sums at or above this witness a normalised gap below
/// [`GAP_THRESHOLD`].
pub const SINE_SUM_THRESHOLD: f64 = 1.33;
pub const GAP_THRESHOLD: f64 = 0.78;

const OUTER_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// All pairs with `0 < γ, γ' < T`.
    Sharp,
    /// Outer zero weighted by `ω` centred at `T` with `Δ = T/log T`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrReport {
    pub t: f64,
    pub alpha: f64,
    pub statistic: f64,
    /// `(1/α + α/3)(log T/2π)`, times `T` for the sharp statistic.
    pub predicted: f64,
    pub relative_gap: f64,
    pub weighting: Weighting,
    pub truncation_bound: f64,
    pub zeros_used: usize,
}

/// `sinc²((α/2)(γ − γ') log T)`.
fn sine_kernel(alpha: f64, log_t: f64, d: f64) -> f64 {
    let s = sinc(0.5 * alpha * d * log_t);
    s * s
}

fn check_pairs(pairs: u64) -> Result<()> {
    if pairs > PAIR_CAP {
        return Err(Error::PairBudget {
            needed: pairs,
            cap: PAIR_CAP,
        });
    }
    Ok(())
}

/// `Σ f(a)` over fixed chunks in parallel, merged pairwise.
fn chunked_real<T: Sync>(items: &[T], f: impl Fn(&T) -> f64 + Sync) -> f64 {
    let parts: Vec<Accumulator> = items.par_chunks(OUTER_CHUNK).map(|c| c.iter().map(&f).sum()).collect();
    merge_real(&parts)
}

/// Records with `0 < γ < T`.
fn below(zeros: &ZeroSet, t: f64) -> &[ZeroRecord] {
    zeros.between(0.0, t)
}

/// `Σ_{0<γ,γ'<T} m m' sinc²((α/2)(γ − γ') log T)`, diagonal included.
fn sharp_pair_sum(t: f64, alpha: f64, zeros: &ZeroSet) -> Result<(f64, usize)> {
    zeros.require_coverage(0.0, t)?;
    let recs = below(zeros, t);
    check_pairs((recs.len() as u64).pow(2))?;
    let lt = t.ln();
    let value = chunked_real(recs, |a| {
        let inner: Accumulator = recs
            .iter()
            .map(|b| b.multiplicity as f64 * sine_kernel(alpha, lt, a.ordinate - b.ordinate))
            .sum();
        a.multiplicity as f64 * inner.value()
    });
    Ok((value, recs.len()))
}

/// Sine-kernel pair statistic compared with `(1/α + α/3)` times the
/// matching density.
pub fn sine_kernel_statistic(t: f64, alpha: f64, zeros: &ZeroSet, weighting: Weighting) -> Result<PairCorrReport> {
    if !(alpha > 0.0) || !(t > 2.0 * PI) {
        return Err(Error::domain("sine_kernel_statistic", format!("T = {t}, α = {alpha}")));
    }
    let lt = t.ln();
    let shape = 1.0 / alpha + alpha / 3.0;
    let (statistic, predicted, bound, used) = match weighting {
        Weighting::Sharp => {
            let (s, n) = sharp_pair_sum(t, alpha, zeros)?;
            (s, shape * t / (2.0 * PI) * lt, 0.0, n)
        }
        Weighting::Gaussian => {
            let (s, b, n) = gaussian_sine_sum(t, alpha, zeros, DEFAULT_PAIR_THRESHOLD)?;
            (s, shape * lt / (2.0 * PI), b, n)
        }
    };
    Ok(PairCorrReport {
        t,
        alpha,
        statistic,
        predicted,
        relative_gap: (statistic - predicted).abs() / predicted,
        weighting,
        truncation_bound: bound,
        zeros_used: used,
    })
}

/// `Σ_ρ ω(ρ) Σ_{ρ'} sinc²((α/2)(γ − γ') log T)` over on-line zeros, outer
/// zeros cut where `ω` drops below `threshold` of its peak.
fn gaussian_sine_sum(t: f64, alpha: f64, zeros: &ZeroSet, threshold: f64) -> Result<(f64, f64, usize)> {
    let win = GaussianWindow::standard(t)?;
    let delta = win.delta();
    let r = delta * (1.0 / threshold).ln().sqrt();
    let top = pair_inner_height(t, delta, t + r);
    zeros.require_coverage(0.0, top)?;
    let points: Vec<ZeroPoint> = zeros.points().into_iter().filter(|p| p.rho.im.abs() <= top).collect();
    let outer = points_in(&points, t - r, t + r);
    check_pairs(outer.len() as u64 * points.len() as u64)?;
    let lt = t.ln();
    let value = chunked_real(outer, |a| {
        let inner: Accumulator = points
            .iter()
            .map(|b| b.multiplicity as f64 * sine_kernel(alpha, lt, a.rho.im - b.rho.im))
            .sum();
        gaussian_eval(&win, a.rho).unwrap_or_default().re * a.multiplicity as f64 * inner.value()
    });
    // sinc²(X) <= 4/((α log T)² τ²) away from the diagonal
    let scale = 1.0 / (alpha * lt).powi(2);
    let inner_tail = chunked_real(outer, |a| {
        gaussian_eval(&win, a.rho).unwrap_or_default().norm()
            * (fejer_zero_tail(top, a.rho.im) + fejer_zero_tail(top, -a.rho.im))
            * scale
    });
    let per_zero_max = 2.0 * unit_count(top) + 1.0 + 8.0 * unit_count(top) * PI * PI / 6.0 * scale;
    let outer_tail = win.peak() * gaussian_zero_tail(t, delta, r) * per_zero_max;
    Ok((value, inner_tail + outer_tail, outer.len()))
}

/// Lower bound `2 − S/N` for the fraction of simple zeros up to `T`, where
/// `S` is the sharp pair sum with multiplicities and `N = Σ m`.
pub fn simple_zero_bound(t: f64, alpha: f64, zeros: &ZeroSet) -> Result<f64> {
    let (s, _) = sharp_pair_sum(t, alpha, zeros)?;
    let n: u32 = below(zeros, t).iter().map(|r| r.multiplicity).sum();
    if n == 0 {
        return Err(Error::domain("simple_zero_bound", format!("no zeros below T = {t}")));
    }
    Ok(2.0 - s / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineSumSummary {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    /// Smallest `(γ' − γ) log γ / 2π` over consecutive zeros.
    pub min_normalized_gap: f64,
    pub argmin: (f64, f64),
    /// `Σ_{γ' <= T} sinc²((1/2)(γ − γ') log T)` per zero, diagonal included.
    pub per_zero_sine_sums: SineSumSummary,
    /// Whether some per-zero sum reaches [`SINE_SUM_THRESHOLD`].
    pub lambda_threshold_check: bool,
}

pub fn gap_report(t: f64, zeros: &ZeroSet) -> Result<GapReport> {
    zeros.require_coverage(0.0, t)?;
    let recs: Vec<f64> = zeros.records().iter().map(|r| r.ordinate).filter(|g| *g <= t).collect();
    if recs.len() < 2 {
        return Err(Error::domain(
            "gap_report",
            format!("{} zeros up to T = {t}; need 2", recs.len()),
        ));
    }
    check_pairs((recs.len() as u64).pow(2))?;
    let (mut best, mut arg) = (f64::INFINITY, (0.0, 0.0));
    for w in recs.windows(2) {
        let g = (w[1] - w[0]) * w[0].ln() / (2.0 * PI);
        if g < best {
            best = g;
            arg = (w[0], w[1]);
        }
    }
    let lt = t.ln();
    let mut sums: Vec<f64> = recs
        .par_iter()
        .map(|a| {
            recs.iter()
                .map(|b| sine_kernel(1.0, lt, a - b))
                .sum::<Accumulator>()
                .value()
        })
        .collect();
    sums.sort_by(f64::total_cmp);
    let n = sums.len();
    let median = if n % 2 == 1 {
        sums[n / 2]
    } else {
        0.5 * (sums[n / 2 - 1] + sums[n / 2])
    };
    Ok(GapReport {
        min_normalized_gap: best,
        argmin: arg,
        per_zero_sine_sums: SineSumSummary {
            min: sums[0],
            median,
            max: sums[n - 1],
        },
        lambda_threshold_check: sums[n - 1] >= SINE_SUM_THRESHOLD,
    })
}

/// Two off-line zeros closer than the non-clustering hypothesis allows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterFlag {
    pub first: Complex64,
    pub second: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub n_offline: usize,
    /// `(i, m) → count`: `i` indexes slabs `|σ − 1/2|·log T ∈ [i, i+1)`
    /// (negative `i` left of the line) and `m − 1 < γ <= m`.
    pub boxes: BTreeMap<(i64, i64), usize>,
    pub clustering_flags: Vec<ClusterFlag>,
}

/// Counts stored zeros with `|σ − 1/2| > (log T)^{−1/2+ε}` and flags pairs
/// of them closer than `(log T)^{−1/2+ε}` in ordinate and at most
/// `(log T)^{−1+ε}` in real part.
pub fn offline_census(zeros: &ZeroSet, eps: f64, t: f64) -> CensusReport {
    let lt = t.ln();
    let dist = lt.powf(-0.5 + eps);
    let real_sep = lt.powf(-1.0 + eps);
    let off: Vec<&ZeroRecord> = zeros
        .records()
        .iter()
        .filter(|r| (r.real_part - 0.5).abs() > dist)
        .collect();
    let mut boxes = BTreeMap::new();
    for r in &off {
        let i = ((r.real_part - 0.5) * lt).floor() as i64;
        let m = r.ordinate.ceil() as i64;
        *boxes.entry((i, m)).or_insert(0) += r.multiplicity as usize;
    }
    let mut flags = Vec::new();
    for (k, a) in off.iter().enumerate() {
        for b in &off[k + 1..] {
            if b.ordinate - a.ordinate >= dist {
                break;
            }
            if (b.real_part - a.real_part).abs() <= real_sep {
                flags.push(ClusterFlag {
                    first: a.rho(),
                    second: b.rho(),
                });
            }
        }
    }
    CensusReport {
        n_offline: off.iter().map(|r| r.multiplicity as usize).sum(),
        boxes,
        clustering_flags: flags,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramRow {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
    /// `∫_bin (1 − sinc²(πu)) du`.
    pub gue_prediction: f64,
}

/// Histogram of `(γ − γ') log T / 2π` over ordered pairs `0 < γ' < γ < T`
/// with difference at most `max_range`.
pub fn pair_histogram(t: f64, zeros: &ZeroSet, bin_width: f64, max_range: f64) -> Result<Vec<HistogramRow>> {
    if !(bin_width > 0.0) || !(max_range >= 0.0) {
        return Err(Error::domain(
            "pair_histogram",
            format!("bin width {bin_width} and range {max_range}"),
        ));
    }
    if max_range == 0.0 {
        return Ok(Vec::new());
    }
    zeros.require_coverage(0.0, t)?;
    let bins = (max_range / bin_width).ceil() as usize;
    let scale = t.ln() / (2.0 * PI);
    let recs: Vec<f64> = below(zeros, t).iter().map(|r| r.ordinate).collect();
    let mut counts = vec![0u64; bins];
    for (k, a) in recs.iter().enumerate() {
        for b in &recs[k + 1..] {
            let u = (b - a) * scale;
            if u > max_range {
                break;
            }
            if u > 0.0 {
                counts[((u / bin_width) as usize).min(bins - 1)] += 1;
            }
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| {
            let lo = k as f64 * bin_width;
            let hi = (lo + bin_width).min(max_range);
            let gue = integrate(
                |u| {
                    let s = sinc(PI * u);
                    Complex64::new(1.0 - s * s, 0.0)
                },
                lo,
                hi,
                QuadOptions::new(1e-12),
            )?;
            Ok(HistogramRow {
                bin_lo: lo,
                bin_hi: hi,
                count,
                gue_prediction: gue.value.re,
            })
        })
        .collect()
}

/// Sum of histogram counts.
pub fn histogram_mass(rows: &[HistogramRow]) -> u64 {
    rows.iter().map(|r| r.count).sum()
}
