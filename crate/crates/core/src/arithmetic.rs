//! Prime-side machinery: a smallest-prime-factor sieve, the von Mangoldt
//! function, classification of rational arguments by their prime-power
//! shape, and the weighted `Λ` sums that make up the arithmetic side of the
//! explicit formulas.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::{par_range_sum, par_range_sum_real};

/// Sieve size built on first use.
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;
/// Default ceiling for automatic sieve growth (4 bytes per entry).
pub const DEFAULT_SIEVE_CAP: u64 = 60_000_000;
/// Weights below this fraction of their peak are treated as zero.
pub const EFFECTIVE_ZERO: f64 = 1e-15;

/// Smallest prime factor of every integer up to `limit`.
#[derive(Clone)]
pub struct SieveTable {
    spf: Vec<u32>,
}

impl fmt::Debug for SieveTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SieveTable").field("limit", &self.limit()).finish()
    }
}

impl SieveTable {
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(2) as usize;
        let mut spf = vec![0u32; limit + 1];
        let mut i = 2usize;
        while i * i <= limit {
            if spf[i] == 0 {
                let mut j = i * i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        for (n, p) in spf.iter_mut().enumerate().skip(2) {
            if *p == 0 {
                *p = n as u32;
            }
        }
        SieveTable { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    fn check(&self, n: u64) -> Result<()> {
        if n > self.limit() {
            Err(Error::SieveLimit {
                needed: n,
                limit: self.limit(),
            })
        } else {
            Ok(())
        }
    }

    /// Smallest prime factor; `None` for `n < 2`.
    pub fn smallest_prime_factor(&self, n: u64) -> Result<Option<u64>> {
        self.check(n)?;
        Ok((n >= 2).then(|| self.spf[n as usize] as u64))
    }

    /// `Λ(n)`: `log p` if `n = p^k`, else 0.
    pub fn von_mangoldt(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::domain("von_mangoldt", "n must be positive".to_string()));
        }
        self.check(n)?;
        Ok(self.lambda(n))
    }

    /// `Λ(n)` without range checks; `n` must be in `1..=limit`.
    #[inline]
    fn lambda(&self, n: u64) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let p = self.spf[n as usize];
        let mut m = n as usize;
        while m.is_multiple_of(p as usize) {
            m /= p as usize;
        }
        if m == 1 {
            (p as f64).ln()
        } else {
            0.0
        }
    }

    /// `Σ_{n<=x} Λ(n)`.
    pub fn chebyshev_psi(&self, x: u64) -> Result<f64> {
        self.check(x)?;
        Ok(par_range_sum_real(2, x + 1, |n| self.lambda(n)))
    }
}

struct SharedSieve {
    table: Mutex<Option<Arc<SieveTable>>>,
    cap: AtomicU64,
}

static SHARED: SharedSieve = SharedSieve {
    table: Mutex::new(None),
    cap: AtomicU64::new(DEFAULT_SIEVE_CAP),
};

/// Sets the largest sieve [`shared_sieve`] may build.
pub fn set_sieve_cap(limit: u64) {
    SHARED.cap.store(limit, Ordering::Relaxed);
}

pub fn sieve_cap() -> u64 {
    SHARED.cap.load(Ordering::Relaxed)
}

/// The process-wide sieve, grown on demand to cover `needed`.
pub fn shared_sieve(needed: u64) -> Result<Arc<SieveTable>> {
    let cap = sieve_cap();
    if needed > cap {
        return Err(Error::SieveLimit { needed, limit: cap });
    }
    let mut guard = SHARED.table.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref() {
        if t.limit() >= needed {
            return Ok(Arc::clone(t));
        }
    }
    let current = guard.as_ref().map_or(0, |t| t.limit());
    let limit = needed.max(DEFAULT_SIEVE_LIMIT.min(cap)).max((2 * current).min(cap));
    let table = Arc::new(SieveTable::new(limit));
    *guard = Some(Arc::clone(&table));
    Ok(table)
}

/// `Λ(n)` through the shared sieve.
pub fn von_mangoldt(n: u64) -> Result<f64> {
    shared_sieve(n)?.von_mangoldt(n)
}

/// Prime-power shape of a reduced fraction `r/s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgumentClass {
    One,
    /// `r = p^i`, `s = 1`.
    PrimePower {
        p: u64,
        i: u32,
    },
    /// `r = p^i q^j` with `p < q`, `s = 1`.
    TwoPrimePowers {
        p: u64,
        i: u32,
        q: u64,
        j: u32,
    },
    /// `r = p^i`, `s = q^j`.
    RationalPrimePowers {
        p: u64,
        i: u32,
        q: u64,
        j: u32,
    },
    Other,
}

/// A positive rational `r/s` in lowest terms with its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalArgument {
    pub r: u64,
    pub s: u64,
    pub class: ArgumentClass,
}

impl RationalArgument {
    pub fn value(&self) -> f64 {
        self.r as f64 / self.s as f64
    }
}

impl fmt::Display for RationalArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s == 1 {
            write!(f, "{}", self.r)
        } else {
            write!(f, "{}/{}", self.r, self.s)
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Trial-division factorisation, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Reduces `r/s` and classifies it. Both must be at least 1.
pub fn classify_argument(r: u64, s: u64) -> Result<RationalArgument> {
    if r == 0 || s == 0 {
        return Err(Error::domain(
            "classify_argument",
            format!("{r}/{s} is not a positive rational"),
        ));
    }
    let g = gcd(r, s);
    let (r, s) = (r / g, s / g);
    let num = factorize(r);
    let den = factorize(s);
    let class = match (num.as_slice(), den.as_slice()) {
        ([], []) => ArgumentClass::One,
        ([(p, i)], []) => ArgumentClass::PrimePower { p: *p, i: *i },
        ([(p, i), (q, j)], []) => ArgumentClass::TwoPrimePowers {
            p: *p,
            i: *i,
            q: *q,
            j: *j,
        },
        ([(p, i)], [(q, j)]) => ArgumentClass::RationalPrimePowers {
            p: *p,
            i: *i,
            q: *q,
            j: *j,
        },
        _ => ArgumentClass::Other,
    };
    Ok(RationalArgument { r, s, class })
}

/// A truncated infinite sum together with a bound on what was left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSum {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// Gaussian weight argument: `log(x/n)` or `log(x·n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianVariant {
    Ratio,
    Product,
}

/// Sign of the imaginary part of the exponent `1/2 ± iT`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Plus,
    Minus,
}

/// Bound on `Σ_{n>N} log n · n^{−β} e^{−a(log n − log K)²}` for the terms
/// with `log(n/K) > l`, where `2al > 1 − β`.
fn upper_tail(k_ln: f64, beta: f64, a: f64, l: f64) -> f64 {
    let slope = 2.0 * a * l - (1.0 - beta);
    let peak = ((1.0 - beta) * (k_ln + l) - a * l * l).exp();
    let log_bound = k_ln.abs() + l;
    let integral = peak * (log_bound / slope + 1.0 / (slope * slope));
    let first = log_bound * (-beta * (k_ln + l) - a * l * l).exp();
    integral + first
}

/// `Σ Λ(n) n^{−exponent} exp(−(scale²/4)·log²(x/n or x·n))`, truncated
/// where the weight drops below `eps` of its peak.
pub fn gaussian_lambda_sum_with(
    x: f64,
    scale: f64,
    variant: GaussianVariant,
    exponent: Complex64,
    eps: f64,
) -> Result<LambdaSum> {
    if !(x > 0.0) || !(scale > 0.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(
            "gaussian_lambda_sum",
            format!("need x > 0, scale > 0, 0 < eps < 1; got x={x}, scale={scale}, eps={eps}"),
        ));
    }
    let a = 0.25 * scale * scale;
    let beta = exponent.re;
    // half-width in log n; widened if needed so the tail bound applies
    let l = ((-eps.ln()) / a).sqrt().max((2.0 - beta) / (2.0 * a));
    let ln_x = x.ln();
    let k_ln = match variant {
        GaussianVariant::Ratio => ln_x,
        GaussianVariant::Product => -ln_x,
    };
    let hi_f = (k_ln + l).exp().floor();
    let lo_f = match variant {
        GaussianVariant::Ratio => (k_ln - l).exp().ceil().max(2.0),
        GaussianVariant::Product => 2.0,
    };
    let mut tail = upper_tail(k_ln, beta, a, l);
    if variant == GaussianVariant::Ratio && lo_f > 2.0 {
        let n0 = lo_f - 1.0;
        tail += (-a * l * l).exp() * n0 * n0.ln() * n0.powf(-beta).max(1.0);
    }
    if hi_f < lo_f {
        return Ok(LambdaSum {
            value: Complex64::default(),
            tail_bound: tail,
            terms: 0,
        });
    }
    if !hi_f.is_finite() || hi_f > u64::MAX as f64 / 2.0 {
        return Err(Error::SieveLimit {
            needed: u64::MAX,
            limit: sieve_cap(),
        });
    }
    let (lo, hi) = (lo_f as u64, hi_f as u64);
    let sieve = shared_sieve(hi)?;
    let value = par_range_sum(lo, hi + 1, |n| {
        let lam = sieve.lambda(n);
        if lam == 0.0 {
            return Complex64::default();
        }
        let ln_n = (n as f64).ln();
        let v = ln_n - k_ln;
        (-exponent * ln_n).exp() * (lam * (-a * v * v).exp())
    });
    Ok(LambdaSum {
        value,
        tail_bound: tail,
        terms: hi + 1 - lo,
    })
}

/// `Σ Λ(n) n^{−(1/2 ± iT)} exp(−(scale²/4)·log²(x/n or x·n))`.
pub fn gaussian_lambda_sum(
    x: f64,
    scale: f64,
    variant: GaussianVariant,
    direction: Direction,
    t: f64,
) -> Result<LambdaSum> {
    let im = match direction {
        Direction::Plus => t,
        Direction::Minus => -t,
    };
    gaussian_lambda_sum_with(x, scale, variant, Complex64::new(0.5, im), EFFECTIVE_ZERO)
}

/// `Σ Λ(n)²/n · exp(−log²n / 4M²)` with its tail bound.
pub fn lambda_sq_gaussian_sum(m: f64) -> Result<LambdaSum> {
    lambda_sq_gaussian_sum_with(m, EFFECTIVE_ZERO)
}

pub fn lambda_sq_gaussian_sum_with(m: f64, eps: f64) -> Result<LambdaSum> {
    if !(m > 0.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("lambda_sq_gaussian_sum", format!("M = {m}, eps = {eps}")));
    }
    let a = 1.0 / (4.0 * m * m);
    let v = 2.0 * m * (-eps.ln()).sqrt();
    let hi = v.exp().floor() as u64;
    // Σ_{n>N} log²n/n e^{−a log²n} <= ∫_V^∞ v² e^{−av²} dv
    let tail = (-a * v * v).exp() * (v / (2.0 * a) + 1.0 / (4.0 * a * a * v));
    if hi < 2 {
        return Ok(LambdaSum {
            value: Complex64::default(),
            tail_bound: tail,
            terms: 0,
        });
    }
    let sieve = shared_sieve(hi)?;
    let value = par_range_sum_real(2, hi + 1, |n| {
        let lam = sieve.lambda(n);
        if lam == 0.0 {
            return 0.0;
        }
        let ln_n = (n as f64).ln();
        lam * lam / n as f64 * (-a * ln_n * ln_n).exp()
    });
    Ok(LambdaSum {
        value: Complex64::new(value, 0.0),
        tail_bound: tail,
        terms: hi - 1,
    })
}

/// The three finite prime sums of the Fejér explicit formula, without the
/// common factor `−x^ρ`:
///
/// * `first  = Σ_{x <= n < Qx} Λ(n) n^{−ρ} log(Qx/n)`
/// * `second = Σ_{n < Q/x} Λ(n) n^{−(1−ρ)} L(xn)`, where `L(y) = log(Q/y)`
///   for `y >= 1` and `log(Qy)` for `1/Q < y < 1`
/// * `third  = Σ_{x/Q < n < x} Λ(n) n^{−ρ} log(Qn/x)`
///
/// The `y < 1` branch of `second` only has terms when `x < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FejerSums {
    pub first: Complex64,
    pub second: Complex64,
    pub third: Complex64,
    pub terms: u64,
}

/// Tent weight `L(y)` of the Fejér transform, zero outside `(1/Q, Q)`.
pub fn fejer_tent(y: f64, q: f64) -> f64 {
    if y >= 1.0 && y < q {
        (q / y).ln()
    } else if y < 1.0 && y * q > 1.0 {
        (q * y).ln()
    } else {
        0.0
    }
}

pub fn fejer_lambda_sums(x: f64, rho: Complex64, q: f64) -> Result<FejerSums> {
    if !(x > 0.0) || !(q > 1.0) {
        return Err(Error::domain(
            "fejer_lambda_sums",
            format!("need x > 0 and Q > 1, got x={x}, Q={q}"),
        ));
    }
    let qx = q * x;
    let hi = (qx.ceil() as u64).max((q / x).ceil() as u64);
    let sieve = shared_sieve(hi)?;
    let term = |n: u64, s: Complex64| (-s * (n as f64).ln()).exp() * sieve.lambda(n);

    // n in [x, Qx)
    let lo1 = (x.ceil() as u64).max(1);
    let hi1 = if qx.fract() == 0.0 { qx as u64 } else { qx.ceil() as u64 };
    let first = par_range_sum(lo1, hi1, |n| {
        let w = (qx / n as f64).ln();
        term(n, rho) * w
    });
    // n < Q/x
    let lim2 = q / x;
    let hi2 = if lim2.fract() == 0.0 {
        lim2 as u64
    } else {
        lim2.ceil() as u64
    };
    let second = par_range_sum(1, hi2, |n| term(n, 1.0 - rho) * fejer_tent(x * n as f64, q));
    // n in (x/Q, x)
    let lo3 = ((x / q).floor() as u64 + 1).max(1);
    let hi3 = if x.fract() == 0.0 { x as u64 } else { x.ceil() as u64 };
    let third = par_range_sum(lo3, hi3, |n| term(n, rho) * (q * n as f64 / x).ln());
    let count = |a: u64, b: u64| b.saturating_sub(a);
    Ok(FejerSums {
        first,
        second,
        third,
        terms: count(lo1, hi1) + count(1, hi2) + count(lo3, hi3),
    })
}
