//! Both sides of the explicit formulas: smoothed Landau sums, the zero
//! isolation identity, the log-weighted and Fejér variants, the two double
//! sum theorems, and the sharp-cutoff Gonek sum.
//!
//! Every exact identity is evaluated from both ends independently. Contour
//! integrals involving `χ'/χ` are taken on `Re s = 1/2` with the exact
//! logarithmic derivative; moving them there from `Re s = 1 − c` crosses
//! the pole of `χ'/χ` at `s = 0`, which contributes `K(0)`. The pole of
//! `ζ'/ζ` at `s = 1` contributes `K(1)·x`.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::arithmetic::{
    fejer_lambda_sums, gaussian_lambda_sum_with, lambda_sq_gaussian_sum, von_mangoldt, ArgumentClass, GaussianVariant,
    RationalArgument, EFFECTIVE_ZERO,
};
use crate::error::{Error, Result};
use crate::kernels::{
    fejer_eval, fejer_on_line, gaussian_eval, isolation_eval, FejerWindow, GaussianWindow, IsolationWindow,
};
use crate::special::{chi_log_deriv, integrate, real_pow, ChiMode, QuadOptions};
use crate::sum::{merge_complex, ComplexAccumulator};
use crate::zeta::{s_bound, ZeroPoint, ZeroRecord, ZeroSet, MAX_HEIGHT};

/// Hard cap on kernel evaluations in one double sum.
pub const PAIR_CAP: u64 = 1_000_000_000;
/// Default slack for the `O(1)` terms of the asymptotic identities.
pub const DEFAULT_C_UNC: f64 = 5.0;
/// Relative weight below which pairs are dropped from the double sums.
pub const DEFAULT_PAIR_THRESHOLD: f64 = 1e-15;
/// Exponent `ε` in the `x^{1+ε}/T²` envelope of the log-weighted sum.
pub const LOG_LANDAU_EPS: f64 = 0.1;

/// Gaussian windows are cut at this many widths (`e^{−64}`).
const GAUSS_RADIUS: f64 = 8.0;
/// Absolute tolerance for the `χ'/χ` line integrals.
const CHI_TOLERANCE: f64 = 1e-12;
/// Step for the finite-difference sensitivity of zero-side terms to their
/// ordinates.
const SLOPE_STEP: f64 = 1e-6;
/// Relative rounding allowance per summed term.
const ROUNDOFF: f64 = 64.0 * f64::EPSILON;
/// Number of outer points per parallel chunk.
const OUTER_CHUNK: usize = 64;

/// The two sides of one identity and what was left out of each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidePair {
    pub zero_side: Complex64,
    pub arithmetic_side: Complex64,
    pub zero_truncation_bound: f64,
    pub term_truncation_bound: f64,
    /// Size of the error term the identity itself carries (0 when exact).
    pub envelope: f64,
    pub zeros_used: usize,
    pub terms_used: u64,
}

impl SidePair {
    pub fn residual(&self) -> f64 {
        (self.zero_side - self.arithmetic_side).norm()
    }

    pub fn truncation_budget(&self) -> f64 {
        self.zero_truncation_bound + self.term_truncation_bound
    }

    pub fn within_budget(&self) -> bool {
        self.residual() <= self.truncation_budget() + self.envelope
    }
}

/// A value with an explicit uncertainty from omitted lower-order terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub uncertainty: f64,
}

/// The cofactor `m` in the prime-power case of the first theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrimePowerCofactor {
    /// `m = p^i`
    #[default]
    Power,
    /// `m = p^{2i}`
    SquaredPower,
}

/// Parameters shared by the two double-sum theorems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremParams {
    pub t: f64,
    pub alpha: f64,
    pub eps: f64,
    pub x: RationalArgument,
    pub c_unc: f64,
    pub cofactor: PrimePowerCofactor,
    /// Pairs whose weight falls below this fraction of the peak are dropped.
    pub threshold: f64,
}

impl TheoremParams {
    pub fn new(t: f64, alpha: f64, eps: f64, x: RationalArgument) -> Result<Self> {
        if !(t > 2.0 * PI) || !(alpha > 0.0) || !(eps > 0.0) {
            return Err(Error::domain(
                "TheoremParams",
                format!("need T > 2π, α > 0, ε > 0; got T = {t}, α = {alpha}, ε = {eps}"),
            ));
        }
        Ok(TheoremParams {
            t,
            alpha,
            eps,
            x,
            c_unc: DEFAULT_C_UNC,
            cofactor: PrimePowerCofactor::Power,
            threshold: DEFAULT_PAIR_THRESHOLD,
        })
    }

    /// `M = α √log T`.
    pub fn m(&self) -> f64 {
        self.alpha * self.t.ln().sqrt()
    }

    /// `Δ = T / log T`.
    pub fn delta(&self) -> f64 {
        self.t / self.t.ln()
    }

    pub fn gaussian(&self) -> Result<GaussianWindow> {
        GaussianWindow::new(self.t, self.delta())
    }

    pub fn log_q(&self) -> f64 {
        self.alpha * self.t.ln()
    }

    /// Ways in which the parameters leave the first theorem's hypotheses.
    pub fn theorem1_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let lim = self.t.powf(1.0 - self.eps);
        if self.x.r as f64 >= lim || self.x.s as f64 >= lim {
            out.push(format!("r, s should be below T^(1-ε) = {lim:.3}"));
        }
        if self.alpha >= self.eps / 2.0 {
            out.push(format!("α = {} should be below ε/2 = {}", self.alpha, self.eps / 2.0));
        }
        out
    }

    /// Ways in which the parameters leave the second theorem's hypotheses.
    pub fn theorem2_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let lim = self.t.powf(1.0 - self.alpha) / self.t.ln().powi(5);
        if self.x.r as f64 >= lim || self.x.s as f64 >= lim {
            out.push(format!("r, s should be below T^(1-α)/log^5 T = {lim:.3e}"));
        }
        if self.alpha >= 1.0 {
            out.push(format!("α = {} should be below 1", self.alpha));
        }
        out
    }
}

/// Upper bound on the number of zeros with ordinate in `[t, t + 1]`.
pub(crate) fn unit_count(t: f64) -> f64 {
    let t = t.abs() + 1.0;
    (t.max(2.0 * PI) / (2.0 * PI)).ln() / (2.0 * PI) + 2.0 * s_bound(t) + 1.0
}

/// Bound on `Σ e^{−(γ − c)²/w²}` over zeros (conjugates included) with
/// `|γ − c| > r`.
pub(crate) fn gaussian_zero_tail(c: f64, w: f64, r: f64) -> f64 {
    let mut total = 0.0;
    for dir in [1.0, -1.0] {
        let mut k = 0.0;
        loop {
            let d = r + k;
            let weight = (-(d / w) * (d / w)).exp();
            if weight < 1e-300 {
                break;
            }
            total += weight * unit_count(c + dir * (d + 1.0));
            k += 1.0;
        }
    }
    total
}

/// `∫_R^∞ log((u + b)/2π) / u² du` for `R + b > 0`.
fn log_over_square_tail(r: f64, b: f64) -> f64 {
    let head = ((r + b) / (2.0 * PI)).ln().max(0.0) / r;
    if b.abs() < 1e-12 * r {
        head + 1.0 / r
    } else {
        head + ((r + b) / r).ln() / b
    }
}

/// Bound on `Σ 4/(γ' − c)²` over zeros `γ' > start` (`start > c`); the
/// `S(t)` part enters through summation by parts.
pub(crate) fn fejer_zero_tail(start: f64, c: f64) -> f64 {
    let r = start - c;
    if !(r > 0.0) {
        return f64::INFINITY;
    }
    4.0 * (log_over_square_tail(r, c) / (2.0 * PI) + 2.0 * s_bound(start) / (r * r))
}

/// Records whose ordinate or its conjugate lies in `[lo, hi]`.
fn records_in(zeros: &ZeroSet, lo: f64, hi: f64) -> impl Iterator<Item = &ZeroRecord> {
    let inside = move |g: f64| lo <= g && g <= hi;
    zeros
        .records()
        .iter()
        .filter(move |r| inside(r.ordinate) || inside(-r.ordinate))
}

/// Largest ordinate uncertainty among zeros with ordinate in `[lo, hi]`.
fn max_precision(zeros: &ZeroSet, lo: f64, hi: f64) -> f64 {
    records_in(zeros, lo, hi).fold(0.0, |m, r| m.max(r.precision))
}

/// Largest `|β − 1/2|` among zeros with ordinate in `[lo, hi]`.
fn max_offset(zeros: &ZeroSet, lo: f64, hi: f64) -> f64 {
    records_in(zeros, lo, hi).fold(0.0, |m, r| m.max((r.real_part - 0.5).abs()))
}

/// Outer windows of width `Δ` are assumed cut within this many widths.
const PAIR_OUTER_WIDTHS: f64 = 8.0;

/// Height to which a pair sum whose outer Gaussian window sits at `t` with
/// width `delta` takes its inner sum exactly: a distance `t` beyond
/// `t + 8Δ`, or beyond `outer_top` for thresholds that cut even later.
/// It depends on the threshold only through that fallback.
pub fn pair_inner_height(t: f64, delta: f64, outer_top: f64) -> f64 {
    (t + PAIR_OUTER_WIDTHS * delta).max(outer_top) + t
}

/// Lowest height to which the Fejér identity sums its zeros.
pub const FEJER_SUM_FLOOR: f64 = 4300.0;

/// Height to which the Fejér identity centred at `ρ` sums zeros exactly;
/// the `1/τ²` tail beyond it is bounded analytically.
pub fn fejer_sum_height(rho: Complex64) -> f64 {
    (4.0 * rho.im.abs()).clamp(FEJER_SUM_FLOOR, MAX_HEIGHT)
}

/// `|x^ρ|` over the critical strip.
fn strip_amplitude(x: f64) -> f64 {
    x.max(1.0)
}

/// Points with `lo <= Im ρ <= hi`.
pub(crate) fn points_in(points: &[ZeroPoint], lo: f64, hi: f64) -> &[ZeroPoint] {
    let a = points.partition_point(|p| p.rho.im < lo);
    let b = points.partition_point(|p| p.rho.im <= hi);
    &points[a..b.max(a)]
}

/// `(1/2π) ∫ K(1/2 + it) x^{1/2+it} χ'/χ(1/2 + it) dt` for a Gaussian
/// kernel `K` centred at `center` with width `w` and peak `peak`.
fn gaussian_chi_integral<K>(x: f64, kernel: K, center: Complex64, w: f64, peak: f64) -> Result<(Complex64, f64)>
where
    K: Fn(Complex64) -> Result<Complex64>,
{
    let shift = (0.5 - center.re) / w;
    let r = w * (GAUSS_RADIUS + shift.abs());
    let lx = x.ln();
    let panel = (0.25 * w).min(1.0 / (1.0 + lx.abs()));
    let q = integrate(
        |t| {
            let s = Complex64::new(0.5, t);
            match (kernel(s), chi_log_deriv(s, ChiMode::Exact)) {
                (Ok(k), Ok(chi)) => k * real_pow(x, s) * chi,
                _ => Complex64::default(),
            }
        },
        center.im - r,
        center.im + r,
        QuadOptions::new(CHI_TOLERANCE * 2.0 * PI).with_panel_width(panel),
    )?;
    let reff = r / w;
    let line_peak = peak * (shift * shift).exp() * x.sqrt();
    let tail = line_peak
        * ((center.im.abs() + r + 2.0 * PI) / (2.0 * PI)).ln().max(1.0)
        * 2.0
        * w
        * (-(reff - shift.abs()).powi(2)).exp()
        / (2.0 * reff);
    Ok((q.value / (2.0 * PI), (q.error + tail) / (2.0 * PI)))
}

/// `Σ_{0<γ<T} x^ρ` against `−(T/2π)Λ(x)`, with the classical error term as
/// envelope.
pub fn gonek_sharp_sum(x: f64, t: f64, zeros: &ZeroSet) -> Result<SidePair> {
    if !(x > 1.0) || x.fract() != 0.0 {
        return Err(Error::domain(
            "gonek_sharp_sum",
            format!("x = {x} must be an integer above 1"),
        ));
    }
    zeros.require_coverage(0.0, t)?;
    let points = zeros.points();
    let used = points_in(&points, f64::MIN_POSITIVE, t);
    let used: Vec<&ZeroPoint> = used.iter().filter(|p| p.rho.im < t).collect();
    let zero_side: ComplexAccumulator = used.iter().map(|p| real_pow(x, p.rho) * p.multiplicity as f64).sum();
    let lam = von_mangoldt(x as u64)?;
    Ok(SidePair {
        zero_side: zero_side.value(),
        arithmetic_side: Complex64::new(-t / (2.0 * PI) * lam, 0.0),
        zero_truncation_bound: 0.0,
        term_truncation_bound: 0.0,
        envelope: x * (2.0 * x * t).ln() * (3.0 * x).ln().ln(),
        zeros_used: used.len(),
        terms_used: 1,
    })
}

/// Zero side `Σ K(ρ) x^ρ` of a Gaussian identity over `|Im ρ − c| <= r`.
fn gaussian_zero_side<K>(
    x: f64,
    kernel: K,
    zeros: &ZeroSet,
    c: f64,
    w: f64,
    peak: f64,
) -> Result<(Complex64, f64, usize)>
where
    K: Fn(Complex64) -> Result<Complex64>,
{
    let r = GAUSS_RADIUS * w;
    zeros.require_coverage(c - r, c + r)?;
    let points = zeros.points();
    let used = points_in(&points, c - r, c + r);
    let prec = max_precision(zeros, c - r, c + r);
    let mut acc = ComplexAccumulator::new();
    let mut sensitivity = 0.0;
    for p in used {
        let m = p.multiplicity as f64;
        let v = kernel(p.rho)? * real_pow(x, p.rho) * m;
        let shifted = p.rho + Complex64::new(0.0, SLOPE_STEP);
        let v2 = kernel(shifted)? * real_pow(x, shifted) * m;
        sensitivity += (v2 - v).norm() / SLOPE_STEP * prec + ROUNDOFF * v.norm();
        acc.add(v);
    }
    let dev = max_offset(zeros, c - r, c + r) + 1.0;
    let bound = peak * strip_amplitude(x) * ((dev / w) * (dev / w)).exp() * gaussian_zero_tail(c, w, r);
    Ok((acc.value(), bound + sensitivity, used.len()))
}

/// Smoothed Landau identity with the Gaussian `ω`.
///
/// Arithmetic side:
/// `−(x^{1/2+iT}/2π) [Σ Λ(n) n^{−1/2−iT} e^{−Δ²log²(x/n)/4} + Σ Λ(n) n^{−1/2+iT} e^{−Δ²log²(xn)/4}]
///  − (1/2πi) ∫_{(1/2)} ω(s) x^s χ'/χ(s) ds + ω(0) + ω(1)·x`.
pub fn landau_sides(x: f64, win: &GaussianWindow, zeros: &ZeroSet) -> Result<SidePair> {
    if !(x > 0.0) {
        return Err(Error::domain("landau_sides", format!("x = {x} must be positive")));
    }
    let kernel = |s| gaussian_eval(win, s);
    let (zero_side, zero_bound, zeros_used) = gaussian_zero_side(x, kernel, zeros, win.t(), win.delta(), win.peak())?;

    let c = win.center();
    let ratio = gaussian_lambda_sum_with(x, win.delta(), GaussianVariant::Ratio, c, EFFECTIVE_ZERO)?;
    let product = gaussian_lambda_sum_with(x, win.delta(), GaussianVariant::Product, c.conj(), EFFECTIVE_ZERO)?;
    let pre = real_pow(x, c) / (2.0 * PI);
    let (chi, chi_err) = gaussian_chi_integral(x, kernel, c, win.delta(), win.peak())?;
    let poles = kernel(Complex64::new(0.0, 0.0))? + kernel(Complex64::new(1.0, 0.0))? * x;
    let arithmetic_side = -pre * (ratio.value + product.value) - chi + poles;
    Ok(SidePair {
        zero_side,
        arithmetic_side,
        zero_truncation_bound: zero_bound,
        term_truncation_bound: pre.norm() * (ratio.tail_bound + product.tail_bound) + chi_err,
        envelope: 0.0,
        zeros_used,
        terms_used: ratio.terms + product.terms,
    })
}

/// Arithmetic side of the isolation identity centred at `ρ`, with its
/// truncation bound:
/// `−(x^ρ/2π)[Σ Λ(n) n^{−ρ} e^{−log²(n/x)/4M²} + Σ Λ(n) n^{−(1−ρ)} e^{−log²(nx)/4M²}]
///  − (1/2πi) ∫_{(1/2)} ϖ(s) x^s χ'/χ(s) ds + ϖ(0) + ϖ(1)·x`.
pub fn isolation_arithmetic_side(x: f64, win: &IsolationWindow) -> Result<(Complex64, f64, u64)> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "isolation_arithmetic_side",
            format!("x = {x} must be positive"),
        ));
    }
    let rho = win.rho();
    let scale = 1.0 / win.m();
    let ratio = gaussian_lambda_sum_with(x, scale, GaussianVariant::Ratio, rho, EFFECTIVE_ZERO)?;
    let product = gaussian_lambda_sum_with(x, scale, GaussianVariant::Product, 1.0 - rho, EFFECTIVE_ZERO)?;
    let pre = real_pow(x, rho) / (2.0 * PI);
    let kernel = |s| isolation_eval(win, s);
    let (chi, chi_err) = gaussian_chi_integral(x, kernel, rho, scale, win.m() / PI.sqrt())?;
    let poles = kernel(Complex64::new(0.0, 0.0))? + kernel(Complex64::new(1.0, 0.0))? * x;
    let value = -pre * (ratio.value + product.value) - chi + poles;
    let bound = pre.norm() * (ratio.tail_bound + product.tail_bound) + chi_err;
    Ok((value, bound, ratio.terms + product.terms))
}

/// `Σ_{ρ'} ϖ(ρ') x^{ρ'}` with its truncation bound and the count used.
pub fn isolation_zero_side(x: f64, win: &IsolationWindow, zeros: &ZeroSet) -> Result<(Complex64, f64, usize)> {
    let w = 1.0 / win.m();
    gaussian_zero_side(
        x,
        |s| isolation_eval(win, s),
        zeros,
        win.rho().im,
        w,
        win.m() / PI.sqrt(),
    )
}

pub fn isolation_sides(x: f64, win: &IsolationWindow, zeros: &ZeroSet) -> Result<SidePair> {
    let (zero_side, zero_bound, zeros_used) = isolation_zero_side(x, win, zeros)?;
    let (arithmetic_side, term_bound, terms_used) = isolation_arithmetic_side(x, win)?;
    Ok(SidePair {
        zero_side,
        arithmetic_side,
        zero_truncation_bound: zero_bound,
        term_truncation_bound: term_bound,
        envelope: 0.0,
        zeros_used,
        terms_used,
    })
}

/// `Σ ω(ρ) x^ρ log(γ/2π)` against `(Λ(x)/2π) ∫ ω(1/2+it) χ'/χ(1/2+it) dt`,
/// valid for `1 < x < T/log²T` up to `O(x^{1+ε}/T²)`.
pub fn log_weighted_landau_sides(x: f64, win: &GaussianWindow, zeros: &ZeroSet) -> Result<SidePair> {
    let t = win.t();
    let upper = t / t.ln().powi(2);
    if !(x > 1.0 && x < upper) {
        return Err(Error::domain(
            "log_weighted_landau_sides",
            format!("x = {x} must lie in (1, T/log²T) = (1, {upper:.3})"),
        ));
    }
    let kernel = |s: Complex64| -> Result<Complex64> { Ok(gaussian_eval(win, s)? * (s.im.abs() / (2.0 * PI)).ln()) };
    let (zero_side, zero_bound, zeros_used) = gaussian_zero_side(x, kernel, zeros, t, win.delta(), win.peak())?;
    let zero_bound = zero_bound * ((t + GAUSS_RADIUS * win.delta()) / (2.0 * PI)).ln().max(1.0);

    let lam = if x.fract() == 0.0 { von_mangoldt(x as u64)? } else { 0.0 };
    let (integral, err) = if lam == 0.0 {
        (Complex64::default(), 0.0)
    } else {
        let (v, e) = gaussian_chi_integral(1.0, |s| gaussian_eval(win, s), win.center(), win.delta(), win.peak())?;
        // gaussian_chi_integral already divides by 2π
        (v * lam, e * lam)
    };
    Ok(SidePair {
        zero_side,
        arithmetic_side: integral,
        zero_truncation_bound: zero_bound,
        term_truncation_bound: err,
        envelope: x.powf(1.0 + LOG_LANDAU_EPS) / (t * t),
        zeros_used,
        terms_used: 1,
    })
}

fn snap(v: f64) -> f64 {
    if v.abs() < 1e-12 {
        0.0
    } else {
        v
    }
}

/// `∫_A^∞ log(u/2π)/(u + b)² du` for `A + b > 0`.
fn log_tail_shifted(a: f64, b: f64) -> f64 {
    let head = (a / (2.0 * PI)).ln() / (a + b);
    if b.abs() < 1e-12 * a {
        head + 1.0 / a
    } else {
        head + ((a + b) / a).ln() / b
    }
}

/// `(1/2π) ∫ x^{1/2+it} χ'/χ(1/2+it) W_ρ(1/2+it) dt` with an error bound.
///
/// `|t| <= A` is integrated numerically. Beyond it `χ'/χ = −log(|t|/2π) +
/// O(t⁻²)` and `W_ρ` splits into `c_k e^{iν_k t}/z²`; zero-frequency pieces
/// are integrated in closed form and oscillating ones bounded by the second
/// mean value theorem.
fn fejer_chi_integral(x: f64, win: &FejerWindow) -> Result<(Complex64, f64)> {
    let rho = win.rho();
    let gamma = rho.im;
    let l = win.log_q();
    let a_off = 0.5 - rho.re;
    let lx = x.ln();
    let big_a = (8.0 * gamma.abs()).max(2000.0);
    let freq = lx.abs() + l;
    let q = integrate(
        |t| {
            let s = Complex64::new(0.5, t);
            let w = if a_off == 0.0 {
                Complex64::new(fejer_on_line(l, t - gamma), 0.0)
            } else {
                fejer_eval(win, s).unwrap_or_default()
            };
            real_pow(x, s) * chi_log_deriv(s, ChiMode::Exact).unwrap_or_default() * w
        },
        -big_a,
        big_a,
        QuadOptions::new(CHI_TOLERANCE * 2.0 * PI).with_panel_width((0.5 / (1.0 + freq)).min(0.5)),
    )?;

    let pieces = [
        (Complex64::from_polar((a_off * l).exp(), -gamma * l), l),
        (Complex64::from_polar((-a_off * l).exp(), gamma * l), -l),
        (Complex64::new(-2.0, 0.0), 0.0),
    ];
    let near = big_a - gamma.abs();
    let g_a = (big_a / (2.0 * PI)).ln() / (near * near);
    let mut tail = Complex64::default();
    let mut bound = 0.0;
    for (c, nu) in pieces {
        let omega = snap(lx + nu);
        if omega == 0.0 {
            tail += c * (log_tail_shifted(big_a, -gamma) + log_tail_shifted(big_a, gamma));
        } else {
            bound += c.norm() * 2.0 * 2.0 * g_a / omega.abs();
        }
        // 1/z² versus −1/τ² off the line, and the O(t⁻²) term of χ'/χ
        bound += c.norm()
            * 2.0
            * (3.0 * a_off.abs() * (2.0 * big_a / (2.0 * PI)).ln() / (near * near) + 1.0 / (near.powi(3)));
    }
    let scale = x.sqrt() / (2.0 * PI);
    Ok((
        (q.value + tail * x.sqrt()) / (2.0 * PI),
        q.error / (2.0 * PI) + bound * scale,
    ))
}

/// Fejér explicit formula centred at `ρ`:
/// `Σ_{ρ'} W_ρ(ρ') x^{ρ'} = −x^ρ (first + second + third)
///  − (1/2πi) ∫_{(1/2)} x^s χ'/χ(s) W_ρ(s) ds + W_ρ(0) + W_ρ(1)·x`.
///
/// The zero side sums every zero up to [`fejer_sum_height`]; the `1/τ²`
/// tail beyond it (and its conjugate image) is bounded analytically.
pub fn fejer_landau_sides(x: f64, win: &FejerWindow, zeros: &ZeroSet) -> Result<SidePair> {
    if !(x > 0.0) {
        return Err(Error::domain("fejer_landau_sides", format!("x = {x} must be positive")));
    }
    let rho = win.rho();
    let top = fejer_sum_height(rho);
    if !(top > rho.im.abs() + 1.0) {
        return Err(Error::domain(
            "fejer_landau_sides",
            format!("centre {rho} too high to bound the tail"),
        ));
    }
    zeros.require_coverage(0.0, top)?;
    let points: Vec<ZeroPoint> = zeros.points().into_iter().filter(|p| p.rho.im.abs() <= top).collect();
    let term = |s: Complex64| fejer_eval(win, s).unwrap_or_default() * real_pow(x, s);
    let zero_side: ComplexAccumulator = points.iter().map(|p| term(p.rho) * p.multiplicity as f64).sum();
    let prec = max_precision(zeros, 0.0, top);
    let sensitivity: f64 = points
        .iter()
        .map(|p| {
            let v = term(p.rho);
            let d = term(p.rho + Complex64::new(0.0, SLOPE_STEP)) - v;
            p.multiplicity as f64 * (d.norm() / SLOPE_STEP * prec + ROUNDOFF * v.norm())
        })
        .sum();
    let offset = max_offset(zeros, 0.0, top);
    let dev = offset + (rho.re - 0.5).abs();
    let amp = x.powf(0.5 + offset) * (2.0 * win.q().powf(dev) + 2.0) / 4.0;
    let zero_bound = amp * (fejer_zero_tail(top, rho.im) + fejer_zero_tail(top, -rho.im)) + sensitivity;

    let sums = fejer_lambda_sums(x, rho, win.q())?;
    let (chi, chi_err) = fejer_chi_integral(x, win)?;
    let poles = fejer_eval(win, Complex64::new(0.0, 0.0))? + fejer_eval(win, Complex64::new(1.0, 0.0))? * x;
    let arithmetic_side = -real_pow(x, rho) * (sums.first + sums.second + sums.third) - chi + poles;
    Ok(SidePair {
        zero_side: zero_side.value(),
        arithmetic_side,
        zero_truncation_bound: zero_bound,
        term_truncation_bound: chi_err,
        envelope: 0.0,
        zeros_used: points.len(),
        terms_used: sums.terms,
    })
}

fn check_pair_budget(pairs: u64) -> Result<()> {
    if pairs > PAIR_CAP {
        return Err(Error::PairBudget {
            needed: pairs,
            cap: PAIR_CAP,
        });
    }
    Ok(())
}

/// Sums `f` over fixed chunks of `outer` in parallel and merges pairwise.
fn chunked_sum<T: Sync>(outer: &[T], f: impl Fn(&T) -> Complex64 + Sync) -> Complex64 {
    let parts: Vec<ComplexAccumulator> = outer.par_chunks(OUTER_CHUNK).map(|c| c.iter().map(&f).sum()).collect();
    merge_complex(&parts)
}

/// `2π^{3/2} M Σ_a ω(ρ_a) Σ_b x^{ρ_b} e^{M²(ρ_b − ρ_a)²}`.
///
/// The loop runs over the `ω`-weighted zero. With `ρ_a = ρ'` this is the
/// general left-hand side; at `x = 1` it is also the form with `ω` on the
/// outer zero, since the coupling is symmetric.
fn theorem1_double_sum(p: &TheoremParams, zeros: &ZeroSet, x: f64) -> Result<(Complex64, f64, usize)> {
    let win = p.gaussian()?;
    let (m, delta) = (p.m(), p.delta());
    let cut = (1.0 / p.threshold).ln();
    let r_omega = delta * cut.sqrt();
    let r_couple = (cut + m * m).sqrt() / m;
    zeros.require_coverage(p.t - r_omega - r_couple, p.t + r_omega + r_couple)?;
    let points = zeros.points();
    let weighted = points_in(&points, p.t - r_omega, p.t + r_omega);
    let pairs: u64 = weighted
        .iter()
        .map(|a| points_in(&points, a.rho.im - r_couple, a.rho.im + r_couple).len() as u64)
        .sum();
    check_pair_budget(pairs)?;
    let m2 = m * m;
    let value = chunked_sum(weighted, |a| {
        let w = gaussian_eval(&win, a.rho).unwrap_or_default() * a.multiplicity as f64;
        let inner: ComplexAccumulator = points_in(&points, a.rho.im - r_couple, a.rho.im + r_couple)
            .iter()
            .map(|b| {
                let d = b.rho - a.rho;
                (d * d * m2).exp() * real_pow(x, b.rho) * b.multiplicity as f64
            })
            .sum();
        w * inner.value()
    });
    let pref = 2.0 * PI.powf(1.5) * m;

    let dev = max_offset(zeros, p.t - r_omega - r_couple, p.t + r_omega + r_couple) + 1.0;
    let coupling_mass = (m2 * dev * dev).exp() * (1.0 + gaussian_zero_tail(p.t + r_omega, 1.0 / m, 0.0));
    let amp = strip_amplitude(x) * win.peak() * ((dev / delta) * (dev / delta)).exp();
    let outer_tail = gaussian_zero_tail(p.t, delta, r_omega) * coupling_mass;
    let weight_mass = 1.0 + gaussian_zero_tail(p.t, delta, 0.0);
    let inner_tail = weight_mass * (m2 * dev * dev).exp() * gaussian_zero_tail(p.t + r_omega, 1.0 / m, r_couple);
    let bound = pref * amp * (outer_tail + inner_tail);
    Ok((value * pref, bound, weighted.len()))
}

/// `2π^{3/2} M Σ_ρ x^ρ Σ_{ρ'} ω(ρ') e^{M²(ρ'−ρ)²}`.
pub fn theorem1_zero_side(p: &TheoremParams, zeros: &ZeroSet) -> Result<(Complex64, f64, usize)> {
    theorem1_double_sum(p, zeros, p.x.value())
}

/// Right-hand side of the first theorem for `x = r/s`.
///
/// At `x = 1` this is `2 Σ Λ(n)²/n e^{−log²n/4M²} + Σ_ρ ω(ρ) log γ` with
/// `±c_unc`; needs the zeros for the second sum.
pub fn theorem1_arithmetic_side(p: &TheoremParams, zeros: &ZeroSet) -> Result<Estimate> {
    let m2 = p.m() * p.m();
    let gauss = |v: f64| (-v.ln().powi(2) / (4.0 * m2)).exp();
    let zero = Complex64::default();
    Ok(match p.x.class {
        ArgumentClass::One => {
            let sq = lambda_sq_gaussian_sum(p.m())?;
            let win = p.gaussian()?;
            let (log_sum, _, _) = gaussian_zero_side(
                1.0,
                |s: Complex64| Ok(gaussian_eval(&win, s)? * s.im.abs().ln()),
                zeros,
                p.t,
                p.delta(),
                win.peak(),
            )?;
            Estimate {
                value: 2.0 * sq.value + log_sum,
                uncertainty: p.c_unc,
            }
        }
        ArgumentClass::TwoPrimePowers { p: pp, i, q, j } => {
            let (a, b) = ((pp as f64).powi(i as i32), (q as f64).powi(j as i32));
            Estimate {
                value: Complex64::new((pp as f64).ln() * (q as f64).ln() * (gauss(a) + gauss(b)), 0.0),
                uncertainty: 0.0,
            }
        }
        ArgumentClass::PrimePower { p: pp, i } => {
            let lp = (pp as f64).ln();
            let m = match p.cofactor {
                PrimePowerCofactor::Power => (pp as f64).powi(i as i32),
                PrimePowerCofactor::SquaredPower => (pp as f64).powi(2 * i as i32),
            };
            Estimate {
                value: Complex64::new(-lp * lp * (1.0 + gauss(m)) * p.t.ln() / lp, 0.0),
                uncertainty: lp * lp / pp as f64,
            }
        }
        ArgumentClass::RationalPrimePowers { .. } => {
            warn!("no formula for x = {} in the first theorem; returning 0", p.x);
            Estimate {
                value: zero,
                uncertainty: 0.0,
            }
        }
        ArgumentClass::Other => Estimate {
            value: zero,
            uncertainty: 0.0,
        },
    })
}

/// Both sides of the first theorem at `x = 1`, with `ω` on the outer zero.
pub fn theorem1_x1_sides(p: &TheoremParams, zeros: &ZeroSet) -> Result<SidePair> {
    let (zero_side, bound, used) = theorem1_double_sum(p, zeros, 1.0)?;
    let one = TheoremParams {
        x: crate::arithmetic::classify_argument(1, 1)?,
        ..*p
    };
    let arith = theorem1_arithmetic_side(&one, zeros)?;
    Ok(SidePair {
        zero_side,
        arithmetic_side: arith.value,
        zero_truncation_bound: bound,
        term_truncation_bound: lambda_sq_gaussian_sum(p.m())?.tail_bound * 2.0,
        envelope: arith.uncertainty,
        zeros_used: used,
        terms_used: 0,
    })
}

/// Height to which the inner Fejér sum of the second theorem is taken
/// exactly.
pub fn theorem2_inner_height(p: &TheoremParams) -> f64 {
    pair_inner_height(p.t, p.delta(), p.t + p.delta() * (1.0 / p.threshold).ln().sqrt())
}

/// `Σ_ρ ω(ρ) x^ρ Σ_{ρ'} W_ρ(ρ')`, with a bound on the dropped terms.
///
/// Outer zeros are cut where `ω` falls below the threshold; the inner sum
/// runs to [`theorem2_inner_height`] and its `1/τ²` tail beyond is bounded
/// analytically. The cut does not depend on how far the set extends, so
/// the result is the same for any set covering it.
pub fn theorem2_zero_side(p: &TheoremParams, zeros: &ZeroSet) -> Result<(Complex64, f64, usize)> {
    let win = p.gaussian()?;
    let x = p.x.value();
    let delta = p.delta();
    let r_omega = delta * (1.0 / p.threshold).ln().sqrt();
    let top = theorem2_inner_height(p);
    zeros.require_coverage(0.0, top)?;
    let points: Vec<ZeroPoint> = zeros.points().into_iter().filter(|z| z.rho.im.abs() <= top).collect();
    let outer = points_in(&points, p.t - r_omega, p.t + r_omega);
    check_pair_budget(outer.len() as u64 * points.len() as u64)?;
    let l = p.log_q();
    let value = chunked_sum(outer, |a| {
        let fw = FejerWindow::with_q(a.rho, l.exp()).expect("Q > 1");
        let inner: ComplexAccumulator = points
            .iter()
            .map(|b| {
                let w = if a.rho.re == 0.5 && b.rho.re == 0.5 {
                    Complex64::new(fejer_on_line(l, b.rho.im - a.rho.im), 0.0)
                } else {
                    fejer_eval(&fw, b.rho).unwrap_or_default()
                };
                w * b.multiplicity as f64
            })
            .sum();
        gaussian_eval(&win, a.rho).unwrap_or_default() * real_pow(x, a.rho) * a.multiplicity as f64 * inner.value()
    });

    let dev = 2.0 * max_offset(zeros, 0.0, top);
    let pair_amp = (2.0 * (l * dev).exp() + 2.0) / 4.0;
    let x_amp = strip_amplitude(x);
    let mut inner_tail = ComplexAccumulator::new();
    for a in outer {
        let tail = fejer_zero_tail(top, a.rho.im) + fejer_zero_tail(top, -a.rho.im);
        inner_tail.add(Complex64::new(
            gaussian_eval(&win, a.rho).unwrap_or_default().norm() * a.multiplicity as f64 * tail,
            0.0,
        ));
    }
    let per_zero_max = l * l * (2.0 * unit_count(top) + 1.0) + 8.0 * unit_count(top) * PI * PI / 6.0;
    let outer_tail = win.peak() * gaussian_zero_tail(p.t, delta, r_omega) * per_zero_max;
    let bound = x_amp * pair_amp * (inner_tail.value().re + outer_tail);
    Ok((value, bound, outer.len()))
}

/// Right-hand side of the second theorem for `x = r/s`.
pub fn theorem2_arithmetic_side(p: &TheoremParams) -> Estimate {
    let lt = p.t.ln();
    let ta = p.alpha * lt;
    // log(T^α / v) when v < T^α, else 0
    let head = |v: f64| if v.ln() < ta { ta - v.ln() } else { 0.0 };
    let pow = |b: u64, e: u32| (b as f64).powi(e as i32);
    let value = match p.x.class {
        ArgumentClass::One => ta.powi(3) / (6.0 * PI) + p.alpha / (2.0 * PI) * lt.powi(3),
        ArgumentClass::TwoPrimePowers { p: pp, i, q, j } => {
            (pp as f64).ln() * (q as f64).ln() / (2.0 * PI) * (head(pow(pp, i)) + head(pow(q, j)))
        }
        ArgumentClass::PrimePower { p: pp, i } => -lt * (pp as f64).ln() / (2.0 * PI) * (ta - head(pow(pp, i))),
        ArgumentClass::RationalPrimePowers { p: pp, i, q, j } => {
            (pp as f64).ln() * (q as f64).ln() / (2.0 * PI * pow(q, j)) * (head(pow(pp, i)) + head(pow(q, j)))
        }
        ArgumentClass::Other => 0.0,
    };
    Estimate {
        value: Complex64::new(value, 0.0),
        uncertainty: if p.x.class == ArgumentClass::One { p.c_unc } else { 0.0 },
    }
}

pub fn theorem2_sides(p: &TheoremParams, zeros: &ZeroSet) -> Result<SidePair> {
    let (zero_side, bound, used) = theorem2_zero_side(p, zeros)?;
    let arith = theorem2_arithmetic_side(p);
    Ok(SidePair {
        zero_side,
        arithmetic_side: arith.value,
        zero_truncation_bound: bound,
        term_truncation_bound: 0.0,
        envelope: arith.uncertainty,
        zeros_used: used,
        terms_used: 0,
    })
}

pub fn theorem1_sides(p: &TheoremParams, zeros: &ZeroSet) -> Result<SidePair> {
    if p.x.class == ArgumentClass::One {
        return theorem1_x1_sides(p, zeros);
    }
    let (zero_side, bound, used) = theorem1_zero_side(p, zeros)?;
    let arith = theorem1_arithmetic_side(p, zeros)?;
    Ok(SidePair {
        zero_side,
        arithmetic_side: arith.value,
        zero_truncation_bound: bound,
        term_truncation_bound: 0.0,
        envelope: arith.uncertainty,
        zeros_used: used,
        terms_used: 0,
    })
}
