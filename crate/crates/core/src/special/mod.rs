//! Complex special functions and the vertical-line quadrature used as the
//! numerical oracle for every closed-form Mellin transform.

mod chi;
mod gamma;
mod quad;

pub use chi::{chi_log_deriv, ChiMode, ASYMPTOTIC_MIN_HEIGHT};
pub use gamma::{digamma, log_gamma};
pub use quad::{damped_line_integral, integrate, LineIntegralSpec, QuadOptions, Quadrature, DEFAULT_ABSCISSA};

use num_complex::Complex64;

/// `sin x / x`, with the removable point filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `x^s` for real `x > 0`.
#[inline]
pub fn real_pow(x: f64, s: Complex64) -> Complex64 {
    let lx = x.ln();
    Complex64::from_polar((s.re * lx).exp(), s.im * lx)
}
