//! The three weights of the explicit formulas and their Mellin transforms.
//!
//! * Gaussian `ω(s) = (√π Δ)⁻¹ exp((s − (1/2 + iT))² / Δ²)`
//! * isolation `ϖ(s) = M π^{−1/2} exp(M² (s − ρ)²)`, the Gaussian with
//!   `Δ = 1/M` centred on a zero
//! * Fejér `W_ρ(s) = ((Q^{(s−ρ)/2} − Q^{−(s−ρ)/2}) / (s − ρ))²`
//!
//! Every closed-form transform has a quadrature oracle next to it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arithmetic::fejer_tent;
use crate::error::{Error, Result};
use crate::special::{damped_line_integral, integrate, real_pow, LineIntegralSpec, QuadOptions, Quadrature};

/// Largest `Re` of a Gaussian exponent accepted before reporting overflow.
const GAUSS_EXP_MAX: f64 = 700.0;
/// Largest `|Re(s − ρ)| · log Q` accepted by [`fejer_eval`].
const FEJER_EXP_MAX: f64 = 1400.0;
/// Radius of the Taylor branch around `s = ρ`.
const FEJER_SERIES_RADIUS: f64 = 1e-4;

/// Which transform: `∫ K(s) x^s` or `∫ K(1 − s) x^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MellinVariant {
    Direct,
    Reflected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianWindow {
    t: f64,
    delta: f64,
}

impl GaussianWindow {
    pub fn new(t: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !t.is_finite() {
            return Err(Error::domain("GaussianWindow", format!("T = {t}, Δ = {delta}")));
        }
        Ok(GaussianWindow { t, delta })
    }

    /// `Δ = T / log T`.
    pub fn standard(t: f64) -> Result<Self> {
        if !(t > 1.0) {
            return Err(Error::domain("GaussianWindow", format!("T = {t} must exceed 1")));
        }
        Self::new(t, t / t.ln())
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5, self.t)
    }

    pub fn peak(&self) -> f64 {
        1.0 / (PI.sqrt() * self.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsolationWindow {
    rho: Complex64,
    m: f64,
}

impl IsolationWindow {
    pub fn new(rho: Complex64, m: f64) -> Result<Self> {
        if !(m > 0.0) {
            return Err(Error::domain("IsolationWindow", format!("M = {m} must be positive")));
        }
        Ok(IsolationWindow { rho, m })
    }

    pub fn rho(&self) -> Complex64 {
        self.rho
    }

    pub fn m(&self) -> f64 {
        self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FejerWindow {
    rho: Complex64,
    log_q: f64,
}

impl FejerWindow {
    /// `Q = T^α` with `0 < α < 1`.
    pub fn new(rho: Complex64, alpha: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) || !(t > 1.0) {
            return Err(Error::domain(
                "FejerWindow",
                format!("need 0 < α < 1 and T > 1, got α = {alpha}, T = {t}"),
            ));
        }
        Ok(FejerWindow {
            rho,
            log_q: alpha * t.ln(),
        })
    }

    /// Window with an explicit `Q > 1`.
    pub fn with_q(rho: Complex64, q: f64) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::domain("FejerWindow", format!("Q = {q} must exceed 1")));
        }
        Ok(FejerWindow { rho, log_q: q.ln() })
    }

    pub fn rho(&self) -> Complex64 {
        self.rho
    }

    pub fn q(&self) -> f64 {
        self.log_q.exp()
    }

    pub fn log_q(&self) -> f64 {
        self.log_q
    }

    /// Same `Q`, centred at another point.
    pub fn recentered(&self, rho: Complex64) -> Self {
        FejerWindow { rho, ..*self }
    }
}

fn gaussian_core(amplitude: f64, exponent: Complex64, what: &'static str) -> Result<Complex64> {
    if exponent.re > GAUSS_EXP_MAX {
        return Err(Error::Overflow(what));
    }
    Ok(exponent.exp() * amplitude)
}

pub fn gaussian_eval(win: &GaussianWindow, s: Complex64) -> Result<Complex64> {
    let d = s - win.center();
    gaussian_core(win.peak(), d * d / (win.delta * win.delta), "gaussian_eval")
}

pub fn isolation_eval(win: &IsolationWindow, s: Complex64) -> Result<Complex64> {
    let d = s - win.rho;
    gaussian_core(win.m / PI.sqrt(), d * d * (win.m * win.m), "isolation_eval")
}

/// `W_ρ(s)`; equals `(log Q)²` at `s = ρ`.
pub fn fejer_eval(win: &FejerWindow, s: Complex64) -> Result<Complex64> {
    let z = s - win.rho;
    let l = win.log_q;
    if z.re.abs() * l > FEJER_EXP_MAX {
        return Err(Error::Overflow("fejer_eval"));
    }
    // ((Q^{z/2} − Q^{−z/2})/z)² = l² (sinh u / u)², u = zl/2
    let u = z * (0.5 * l);
    if z.norm() < FEJER_SERIES_RADIUS {
        let u2 = u * u;
        let ratio = 1.0 + u2 * (1.0 / 6.0 + u2 * (1.0 / 120.0 + u2 * (1.0 / 5040.0)));
        return Ok(ratio * ratio * (l * l));
    }
    let w = 2.0 * u.sinh() / z;
    Ok(w * w)
}

/// `W_ρ(1/2 + it)` for `ρ` on the critical line: `4 sin²(τ l/2)/τ²`, `τ = t − γ`.
pub fn fejer_on_line(log_q: f64, tau: f64) -> f64 {
    let h = 0.5 * tau * log_q;
    if h.abs() < 1e-4 {
        let h2 = h * h;
        let r = 1.0 - h2 / 6.0 + h2 * h2 / 120.0;
        log_q * log_q * r * r
    } else {
        let s = 2.0 * h.sin() / tau;
        s * s
    }
}

/// `(1/2πi) ∫_{(c)} ω(s) x^s ds` (direct) or with `ω(1 − s)` (reflected).
pub fn gaussian_mellin_closed(win: &GaussianWindow, x: f64, variant: MellinVariant) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "gaussian_mellin_closed",
            format!("x = {x} must be positive"),
        ));
    }
    let l = x.ln();
    let center = match variant {
        MellinVariant::Direct => win.center(),
        MellinVariant::Reflected => win.center().conj(),
    };
    let damp = (-0.25 * win.delta * win.delta * l * l).exp();
    Ok(real_pow(x, center) * (damp / (2.0 * PI)))
}

/// `(1/2πi) ∫_{(c)} ϖ(s) x^s ds = (1/2π) x^ρ e^{−log²x / 4M²}`.
pub fn isolation_mellin_closed(win: &IsolationWindow, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "isolation_mellin_closed",
            format!("x = {x} must be positive"),
        ));
    }
    let l = x.ln();
    let damp = (-l * l / (4.0 * win.m * win.m)).exp();
    Ok(real_pow(x, win.rho) * (damp / (2.0 * PI)))
}

/// `(1/2πi) ∫_{(c)} W_ρ(s) y^s ds`: `y^ρ log(Qy)` on `(1/Q, 1)`,
/// `y^ρ log(Q/y)` on `[1, Q)`, zero elsewhere. The reflected variant uses
/// `W_ρ(1 − s) = W_{1−ρ}(s)` and so carries `y^{1−ρ}`.
pub fn fejer_mellin_closed(win: &FejerWindow, y: f64, variant: MellinVariant) -> Result<Complex64> {
    if !(y > 0.0) {
        return Err(Error::domain(
            "fejer_mellin_closed",
            format!("y = {y} must be positive"),
        ));
    }
    let tent = fejer_tent(y, win.q());
    if tent == 0.0 {
        return Ok(Complex64::default());
    }
    let rho = match variant {
        MellinVariant::Direct => win.rho,
        MellinVariant::Reflected => 1.0 - win.rho,
    };
    Ok(real_pow(y, rho) * tent)
}

/// Half-width (in units of the Gaussian width) beyond which a Gaussian
/// integrand of peak `amplitude` contributes less than `tolerance / 10`.
fn gaussian_cutoff(amplitude: f64, tolerance: f64) -> f64 {
    (10.0 * amplitude.max(1.0) / tolerance).ln().max(1.0).sqrt() + 1.0
}

/// Quadrature oracle for [`gaussian_mellin_closed`] on the line `Re s = c`.
pub fn gaussian_mellin_oracle(
    win: &GaussianWindow,
    x: f64,
    variant: MellinVariant,
    abscissa: f64,
    tolerance: f64,
) -> Result<Quadrature> {
    let shift = abscissa - 0.5;
    let amplitude = x.powf(abscissa) * (shift * shift / (win.delta * win.delta)).exp();
    let center = match variant {
        MellinVariant::Direct => win.t,
        MellinVariant::Reflected => -win.t,
    };
    let spec = LineIntegralSpec::new(
        abscissa,
        center,
        win.delta,
        gaussian_cutoff(amplitude, tolerance),
        tolerance,
    )?
    .with_panel(0.25);
    damped_line_integral(
        |s| {
            let arg = match variant {
                MellinVariant::Direct => s,
                MellinVariant::Reflected => 1.0 - s,
            };
            gaussian_eval(win, arg).map_or(Complex64::default(), |w| w * real_pow(x, s))
        },
        &spec,
    )
}

/// Quadrature oracle for [`isolation_mellin_closed`].
pub fn isolation_mellin_oracle(win: &IsolationWindow, x: f64, abscissa: f64, tolerance: f64) -> Result<Quadrature> {
    let shift = abscissa - win.rho.re;
    let amplitude = x.powf(abscissa) * (shift * shift * win.m * win.m).exp() * win.m;
    let spec = LineIntegralSpec::new(
        abscissa,
        win.rho.im,
        1.0 / win.m,
        gaussian_cutoff(amplitude, tolerance),
        tolerance,
    )?
    .with_panel(0.25);
    damped_line_integral(
        |s| isolation_eval(win, s).map_or(Complex64::default(), |w| w * real_pow(x, s)),
        &spec,
    )
}

/// `∫ ω(1/2 + it) dt`, which should be 1.
pub fn gaussian_line_mass(win: &GaussianWindow, tolerance: f64) -> Result<Quadrature> {
    let h = gaussian_cutoff(1.0, tolerance) * win.delta;
    integrate(
        |t| gaussian_eval(win, Complex64::new(0.5, t)).unwrap_or_default(),
        win.t - h,
        win.t + h,
        QuadOptions::new(tolerance).with_panel_width(0.25 * win.delta),
    )
}

/// Asymptotic value of `G(z) = e^{lz} Σ_k (k+1)! z^{−k−2} / l^{k+1}`, an
/// antiderivative of `e^{lz} z^{−2}` that vanishes far up the line.
fn exp_over_z2_antiderivative(l: f64, z: Complex64) -> Complex64 {
    if l == 0.0 {
        return -z.inv();
    }
    let w = (z * l).inv();
    let mut term = z.inv() * z.inv() / l;
    let mut sum = term;
    for k in 1..16 {
        let next = term * w * (k as f64 + 1.0);
        if next.norm() >= term.norm() {
            break;
        }
        term = next;
        sum += term;
    }
    (z * l).exp() * sum
}

/// `∫_{|τ| > H} e^{l z} z^{−2} dτ` on `z = a + iτ`.
fn exp_over_z2_tails(l: f64, a: f64, h: f64) -> Complex64 {
    let l = snap_log(l);
    let i = Complex64::i();
    let upper = i * exp_over_z2_antiderivative(l, Complex64::new(a, h));
    let lower = -i * exp_over_z2_antiderivative(l, Complex64::new(a, -h));
    upper + lower
}

/// Logarithms this close to 0 come from rounding at a breakpoint.
fn snap_log(l: f64) -> f64 {
    if l.abs() < 1e-12 {
        0.0
    } else {
        l
    }
}

/// Window half-width for `u^z / z²` pieces: large enough that the tail
/// series is accurate for every non-zero `log u`.
fn fejer_half_width(logs: &[f64]) -> f64 {
    let smallest = logs
        .iter()
        .map(|l| snap_log(*l))
        .filter(|l| *l != 0.0)
        .fold(f64::INFINITY, |m, l| m.min(l.abs()));
    if smallest.is_finite() {
        (60.0 / smallest).clamp(400.0, 1e5)
    } else {
        400.0
    }
}

/// `(1/2πi) ∫_{(a)} u^z dz / z²`: `log u` for `u > 1` and 0 for `u < 1`
/// when `a > 0`.
pub fn perron_oracle(u: f64, a: f64, tolerance: f64) -> Result<Quadrature> {
    let l = u.ln();
    let h = fejer_half_width(&[l]);
    let q = integrate(
        |tau| {
            let z = Complex64::new(a, tau);
            (z * l).exp() / (z * z)
        },
        -h,
        h,
        QuadOptions::new(tolerance * 2.0 * PI).with_panel_width(0.5),
    )?;
    let total = q.value + exp_over_z2_tails(l, a, h);
    Ok(Quadrature {
        value: total / (2.0 * PI),
        error: q.error / (2.0 * PI),
    })
}

/// Quadrature oracle for [`fejer_mellin_closed`] on `Re s = c`.
///
/// The window around the kernel's centre is integrated numerically with
/// [`fejer_eval`]; beyond it the integrand splits exactly into
/// `y^ρ [(Qy)^z + (y/Q)^z − 2y^z] / z²` and those tails are added in closed
/// form.
pub fn fejer_mellin_oracle(
    win: &FejerWindow,
    y: f64,
    variant: MellinVariant,
    abscissa: f64,
    tolerance: f64,
) -> Result<Quadrature> {
    let rho = match variant {
        MellinVariant::Direct => win.rho,
        MellinVariant::Reflected => 1.0 - win.rho,
    };
    let l = win.log_q;
    let ly = y.ln();
    let logs = [ly + l, ly - l, ly];
    let h = fejer_half_width(&logs);
    let spec = LineIntegralSpec::new(abscissa, rho.im, 1.0, h, tolerance)?.with_panel(0.5);
    let window = damped_line_integral(
        |s| {
            let arg = match variant {
                MellinVariant::Direct => s,
                MellinVariant::Reflected => 1.0 - s,
            };
            fejer_eval(win, arg).unwrap_or_default() * real_pow(y, s)
        },
        &spec,
    )?;
    let a = abscissa - rho.re;
    let tails =
        exp_over_z2_tails(logs[0], a, h) + exp_over_z2_tails(logs[1], a, h) - 2.0 * exp_over_z2_tails(logs[2], a, h);
    Ok(Quadrature {
        value: window.value + real_pow(y, rho) * tails / (2.0 * PI),
        error: window.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gaussian_peak_and_width() {
        let w = GaussianWindow::standard(200.0).unwrap();
        let peak = gaussian_eval(&w, w.center()).unwrap();
        assert!((peak.re - w.peak()).abs() < 1e-16 && peak.im == 0.0);
        let one_out = gaussian_eval(&w, c(0.5, 200.0 + w.delta())).unwrap();
        assert!((one_out.re - w.peak() / std::f64::consts::E).abs() < 1e-15);
        assert!(matches!(
            gaussian_eval(&w, c(0.5 + 30.0 * w.delta(), 200.0)),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn isolation_matches_gaussian() {
        let rho = c(0.5, 77.0);
        let iso = IsolationWindow::new(rho, 1.7).unwrap();
        let g = GaussianWindow::new(77.0, 1.0 / 1.7).unwrap();
        for k in 0..10 {
            let s = c(0.1 * k as f64, 76.0 + 0.2 * k as f64);
            assert!((isolation_eval(&iso, s).unwrap() - gaussian_eval(&g, s).unwrap()).norm() < 1e-14);
        }
        let one = isolation_eval(&iso, rho + c(0.0, 1.0 / 1.7)).unwrap();
        assert!((one.re - 1.7 / PI.sqrt() / std::f64::consts::E).abs() < 1e-13);
    }

    #[test]
    fn fejer_special_points() {
        let t: f64 = 1000.0;
        let alpha = 0.5;
        let lq = alpha * t.ln();
        let rho = c(0.5, 123.4);
        let w = FejerWindow::new(rho, alpha, t).unwrap();
        assert!((fejer_eval(&w, rho).unwrap() - lq * lq).norm() < 1e-12);
        let node = fejer_eval(&w, rho + c(0.0, 4.0 * PI / lq)).unwrap();
        assert!(node.norm() < 1e-12);
        // seam of the series branch
        for r in [0.99e-4, 1.01e-4] {
            let s = rho + c(0.0, r);
            let x = 0.5 * r * lq;
            let want = lq * lq * (x.sin() / x).powi(2);
            assert!((fejer_eval(&w, s).unwrap().re - want).abs() < 1e-12 * want);
        }
        assert!(matches!(fejer_eval(&w, rho + c(500.0, 0.0)), Err(Error::Overflow(_))));
        assert!(FejerWindow::new(rho, 1.0, t).is_err());
    }

    #[test]
    fn fejer_on_line_agrees() {
        let w = FejerWindow::with_q(c(0.5, 50.0), 12.0).unwrap();
        for tau in [-3.0, -1e-6, 0.0, 0.4, 2.0, 17.0] {
            let direct = fejer_eval(&w, c(0.5, 50.0 + tau)).unwrap();
            assert!(direct.im.abs() < 1e-12);
            assert!((direct.re - fejer_on_line(w.log_q(), tau)).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_transform_matches_oracle() {
        let w = GaussianWindow::standard(100.0).unwrap();
        for x in [1.0, 2.0, 1.01, 0.97] {
            for v in [MellinVariant::Direct, MellinVariant::Reflected] {
                let closed = gaussian_mellin_closed(&w, x, v).unwrap();
                let oracle = gaussian_mellin_oracle(&w, x, v, 1.5, 1e-11).unwrap();
                assert!(
                    (closed - oracle.value).norm() < 1e-8,
                    "{x} {v:?}: {closed} {}",
                    oracle.value
                );
            }
        }
        let one = gaussian_mellin_closed(&w, 1.0, MellinVariant::Direct).unwrap();
        assert!((one - c(0.5 / PI, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn fejer_transform_values() {
        let w = FejerWindow::with_q(c(0.5, 20.0), 10.0).unwrap();
        let v = fejer_mellin_closed(&w, 0.5, MellinVariant::Direct).unwrap();
        assert!((v - real_pow(0.5, c(0.5, 20.0)) * 5f64.ln()).norm() < 1e-15);
        assert_eq!(
            fejer_mellin_closed(&w, 20.0, MellinVariant::Direct).unwrap(),
            Complex64::default()
        );
        assert!((fejer_mellin_closed(&w, 1.0, MellinVariant::Reflected).unwrap() - c(10f64.ln(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn perron_pieces() {
        for (u, want) in [(3.0, 3f64.ln()), (0.4, 0.0), (1.0, 0.0)] {
            let q = perron_oracle(u, 1.0, 1e-10).unwrap();
            assert!((q.value - c(want, 0.0)).norm() < 1e-8, "{u}: {}", q.value);
        }
    }
}
