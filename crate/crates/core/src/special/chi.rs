//! Logarithmic derivative of the functional-equation factor
//! `χ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::digamma;
use crate::error::{Error, Result};

/// Minimum `|Im s|` accepted by [`ChiMode::Asymptotic`].
pub const ASYMPTOTIC_MIN_HEIGHT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiMode {
    /// `log 2π + (π/2) cot(πs/2) − ψ(1−s)`.
    Exact,
    /// `−log(|t|/2π) − i(1−2σ)/(2t)`, accurate to `O(t⁻²)`.
    Asymptotic,
}

/// Cotangent that stays finite for large imaginary parts.
fn cot(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    if w.im >= 0.0 {
        let q = (2.0 * i * w).exp();
        i * (q + 1.0) / (q - 1.0)
    } else {
        let q = (-2.0 * i * w).exp();
        i * (1.0 + q) / (1.0 - q)
    }
}

fn is_integer(x: f64) -> bool {
    x.fract() == 0.0
}

/// `χ'/χ(s)`.
pub fn chi_log_deriv(s: Complex64, mode: ChiMode) -> Result<Complex64> {
    match mode {
        ChiMode::Exact => {
            if s.im == 0.0 && is_integer(s.re) && (s.re >= 1.0 || (s.re as i64) % 2 == 0) {
                return Err(Error::Pole {
                    function: "chi_log_deriv",
                    at: format!("{}", s.re),
                });
            }
            let value = Complex64::new((2.0 * PI).ln(), 0.0) + 0.5 * PI * cot(0.5 * PI * s) - digamma(1.0 - s)?;
            if value.re.is_finite() && value.im.is_finite() {
                Ok(value)
            } else {
                Err(Error::Overflow("chi_log_deriv"))
            }
        }
        ChiMode::Asymptotic => {
            let t = s.im;
            if t.abs() < ASYMPTOTIC_MIN_HEIGHT {
                return Err(Error::domain(
                    "chi_log_deriv",
                    format!("asymptotic mode needs |Im s| >= {ASYMPTOTIC_MIN_HEIGHT}, got {t}"),
                ));
            }
            Ok(Complex64::new(
                -(t.abs() / (2.0 * PI)).ln(),
                -(1.0 - 2.0 * s.re) / (2.0 * t),
            ))
        }
    }
}
