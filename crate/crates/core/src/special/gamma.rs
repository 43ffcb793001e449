//! Complex log-gamma and digamma.
//!
//! Both use the Stirling series once `Re(z) >= 8` and walk up there with the
//! recurrence. The log-gamma branch is the analytic continuation from the
//! positive real axis (the usual `loggamma`), not `ln(Γ(z))` with a
//! principal log; the shift sums principal logs term by term, which keeps
//! the imaginary part continuous along vertical lines.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const STIRLING_RE_MIN: f64 = 8.0;

/// B_{2k} for k = 1..=11.
const BERNOULLI_EVEN: [f64; 11] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

fn check_pole(s: Complex64, function: &'static str) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::domain(function, format!("non-finite argument {s}")));
    }
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        return Err(Error::Pole {
            function,
            at: format!("{}", s.re),
        });
    }
    Ok(())
}

/// Number of unit steps needed to bring `re` up to the Stirling region.
fn shift_count(re: f64) -> usize {
    if re >= STIRLING_RE_MIN {
        0
    } else {
        (STIRLING_RE_MIN - re).ceil() as usize
    }
}

/// `log Γ(s)` on the branch continuous with the real log-gamma for `s > 0`.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    check_pole(s, "log_gamma")?;
    let steps = shift_count(s.re);
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    for _ in 0..steps {
        shift += z.ln();
        z += 1.0;
    }
    let out = stirling_log_gamma(z) - shift;
    if out.re.is_finite() && out.im.is_finite() {
        Ok(out)
    } else {
        Err(Error::Overflow("log_gamma"))
    }
}

fn stirling_log_gamma(z: Complex64) -> Complex64 {
    let ln_z = z.ln();
    let mut out = (z - 0.5) * ln_z - z + 0.5 * (2.0 * PI).ln();
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        out += pow * (*b / (n * (n - 1.0)));
        pow *= inv2;
    }
    out
}

/// Digamma `ψ(s) = Γ'(s)/Γ(s)`.
pub fn digamma(s: Complex64) -> Result<Complex64> {
    check_pole(s, "digamma")?;
    let steps = shift_count(s.re);
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    for _ in 0..steps {
        shift += z.inv();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut out = z.ln() - 0.5 * inv;
    let mut pow = inv2;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        out -= pow * (*b / n);
        pow *= inv2;
    }
    let out = out - shift;
    if out.re.is_finite() && out.im.is_finite() {
        Ok(out)
    } else {
        Err(Error::Overflow("digamma"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_gamma_classical_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(half.im.abs() < 1e-15);
        // ln(4!) = ln 24
        assert!((log_gamma(c(5.0, 0.0)).unwrap().re - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn log_gamma_matches_reference() {
        // reference values from a 30-digit evaluation
        let cases = [
            (c(5.0, 3.0), c(2.244_246_717_020_217_7, 4.714_089_538_904_929_4)),
            (c(0.3, -40.0), c(-62.650_686_053_968_13, -107.241_560_579_886_68)),
            (c(-2.5, 0.7), c(-1.494_187_308_911_357_5, -8.646_475_682_803_377)),
        ];
        for (s, want) in cases {
            let got = log_gamma(s).unwrap();
            assert!(
                (got - want).norm() < 1e-12 * want.norm().max(1.0),
                "{s}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(c(1.0, 0.0)).unwrap().re + EULER_GAMMA).abs() < 1e-15);
        assert!((digamma(c(2.0, 0.0)).unwrap().re - (1.0 - EULER_GAMMA)).abs() < 1e-15);
        let want = c(2.624_158_474_943_288_6, 0.810_814_829_568_106_9);
        assert!((digamma(c(10.0, 10.0)).unwrap() - want).norm() < 1e-14);
        let want = c(5.298_316_324_876_813, -std::f64::consts::FRAC_PI_2);
        assert!((digamma(c(0.5, -200.0)).unwrap() - want).norm() < 1e-13);
    }

    #[test]
    fn digamma_is_derivative_of_log_gamma() {
        let s = c(10.0, 10.0);
        let h = 1e-5;
        let fd = (log_gamma(s + h).unwrap() - log_gamma(s - h).unwrap()) / (2.0 * h);
        assert!((fd - digamma(s).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn poles_are_errors() {
        for re in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(re, 0.0)), Err(Error::Pole { .. })));
            assert!(matches!(digamma(c(re, 0.0)), Err(Error::Pole { .. })));
        }
        assert!(log_gamma(c(-1.0, 1e-9)).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn log_gamma_recurrence(re in 0.1f64..10.0, im in -50.0f64..50.0) {
                let s = c(re, im);
                let lhs = log_gamma(s + 1.0).unwrap() - log_gamma(s).unwrap() - s.ln();
                prop_assert!(lhs.norm() < 1e-11, "residual {}", lhs.norm());
            }

            #[test]
            fn digamma_recurrence(re in 0.1f64..10.0, im in -50.0f64..50.0) {
                let s = c(re, im);
                let lhs = digamma(s + 1.0).unwrap() - digamma(s).unwrap() - s.inv();
                prop_assert!(lhs.norm() < 1e-12);
            }
        }
    }
}
