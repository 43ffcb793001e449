//! ζ(s), the Riemann–Siegel theta function and Hardy's Z.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::log_gamma;
use crate::sum::ComplexAccumulator;

/// B_{2k} for k = 1..=8 (the Euler–Maclaurin correction terms).
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Table of `(ln n, n^{-1/2})` shared by every evaluation.
struct LogTable {
    ln: Vec<f64>,
    inv_sqrt: Vec<f64>,
}

const TABLE_LEN: usize = 20_000;

fn log_table() -> &'static LogTable {
    static TABLE: OnceLock<LogTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut ln = Vec::with_capacity(TABLE_LEN);
        let mut inv_sqrt = Vec::with_capacity(TABLE_LEN);
        ln.push(0.0);
        inv_sqrt.push(0.0);
        for n in 1..TABLE_LEN {
            let x = n as f64;
            ln.push(x.ln());
            inv_sqrt.push(1.0 / x.sqrt());
        }
        LogTable { ln, inv_sqrt }
    })
}

/// Number of explicit terms used by Euler–Maclaurin at height `t`.
pub fn em_terms(t: f64) -> usize {
    (1.3 * t.abs()).ceil().max(20.0) as usize
}

#[inline]
fn n_pow_neg(n: usize, s: Complex64, table: &LogTable) -> Complex64 {
    let (ln, scale) = if n < TABLE_LEN {
        let scale = if s.re == 0.5 {
            table.inv_sqrt[n]
        } else {
            (-s.re * table.ln[n]).exp()
        };
        (table.ln[n], scale)
    } else {
        let ln = (n as f64).ln();
        (ln, (-s.re * ln).exp())
    };
    let (sin, cos) = (s.im * ln).sin_cos();
    Complex64::new(scale * cos, -scale * sin)
}

fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let table = log_table();
    let n = em_terms(s.im);
    let mut acc = ComplexAccumulator::new();
    for k in 1..n {
        acc.add(n_pow_neg(k, s, table));
    }
    let nf = n as f64;
    let n_s = n_pow_neg(n, s, table);
    acc.add(n_s * nf / (s - 1.0));
    acc.add(n_s * 0.5);
    // T_k = B_2k/(2k)! · s(s+1)…(s+2k−2) · N^{-s-2k+1}
    let inv_n = 1.0 / nf;
    let mut rising = s; // s(s+1)…(s+2k-2)
    let mut npow = n_s * inv_n; // N^{-s-2k+1}
    let mut fact = 2.0; // (2k)!
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let k = k as f64 + 1.0;
        acc.add(rising * npow * (*b / fact));
        rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
        npow *= inv_n * inv_n;
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    acc.value()
}

fn log_sin(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    if w.im.abs() < 10.0 {
        return w.sin().ln();
    }
    if w.im > 0.0 {
        -i * w + Complex64::new(0.0, 0.5).ln() + (1.0 - (2.0 * i * w).exp()).ln()
    } else {
        i * w + Complex64::new(0.0, -0.5).ln() + (1.0 - (-2.0 * i * w).exp()).ln()
    }
}

/// `log χ(s)` for `χ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s)`, any branch.
fn log_chi(s: Complex64) -> Result<Complex64> {
    Ok(s * 2f64.ln() + (s - 1.0) * PI.ln() + log_sin(0.5 * PI * s) + log_gamma(1.0 - s)?)
}

/// The Riemann zeta function.
///
/// Euler–Maclaurin summation for `Re s >= 0`, the functional equation
/// `ζ(s) = χ(s) ζ(1-s)` to the left of that.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta",
            at: "1".into(),
        });
    }
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::domain("zeta", format!("non-finite argument {s}")));
    }
    let value = if s.re >= 0.0 {
        zeta_euler_maclaurin(s)
    } else {
        // trivial zeros: sin(πs/2) = 0
        if s.im == 0.0 && (s.re / 2.0).fract() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        log_chi(s)?.exp() * zeta_euler_maclaurin(1.0 - s)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow("zeta"))
    }
}

/// Smallest height accepted by [`rs_theta`] and [`hardy_z`].
pub const MIN_HEIGHT: f64 = 10.0;

fn check_height(t: f64, what: &'static str) -> Result<()> {
    if t >= MIN_HEIGHT && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, format!("t = {t} is below {MIN_HEIGHT}")))
    }
}

/// Riemann–Siegel theta function from its asymptotic series.
pub fn rs_theta(t: f64) -> Result<f64> {
    check_height(t, "rs_theta")?;
    Ok(theta_series(t, 5))
}

/// The asymptotic series with `terms` correction terms (`1/(48t)` first).
pub fn theta_series(t: f64, terms: usize) -> f64 {
    const COEFFS: [f64; 5] = [
        1.0 / 48.0,
        7.0 / 5760.0,
        31.0 / 80640.0,
        127.0 / 430080.0,
        511.0 / 1216512.0,
    ];
    let mut out = 0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0;
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in COEFFS.iter().take(terms) {
        out += c * pow;
        pow *= inv2;
    }
    out
}

/// `θ'(t)`.
pub fn rs_theta_deriv(t: f64) -> f64 {
    let t2 = t * t;
    0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t2) - 7.0 / (1920.0 * t2 * t2)
}

/// Hardy's function `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, which is real.
pub fn hardy_z(t: f64) -> Result<f64> {
    Ok(hardy_z_parts(t)?.re)
}

/// `e^{iθ(t)} ζ(1/2 + it)` before the imaginary residue is discarded.
pub fn hardy_z_parts(t: f64) -> Result<Complex64> {
    let theta = rs_theta(t)?;
    let z = zeta(Complex64::new(0.5, t))?;
    Ok(Complex64::from_polar(1.0, theta) * z)
}

/// Smooth part of the zero counting function, `θ(T)/π + 1`.
pub fn zero_count_theoretic(t: f64) -> Result<f64> {
    Ok(rs_theta(t)? / PI + 1.0)
}

/// Explicit bound on `|S(t)|` (Trudgian): `0.112 log t + 0.278 log log t + 2.51`.
pub fn s_bound(t: f64) -> f64 {
    let t = t.max(MIN_HEIGHT);
    0.112 * t.ln() + 0.278 * t.ln().ln() + 2.51
}

/// Gram point `g_n`, the solution of `θ(g) = nπ` for `n >= 0`.
pub fn gram_point(n: i64) -> f64 {
    let target = n as f64 * PI;
    // θ is increasing and convex above 2π·e; bracket, then Newton with a
    // bisection fallback
    let mut lo = 17.0;
    let mut hi = 40.0;
    while theta_series(hi, 5) < target {
        lo = hi;
        hi *= 2.0;
    }
    let mut t = hi;
    for _ in 0..100 {
        let f = theta_series(t, 5) - target;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let mut next = t - f / rs_theta_deriv(t);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-14 * t {
            return next;
        }
        t = next;
    }
    t
}
