use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;
use zerolab_core::arithmetic::{classify_argument, lambda_sq_gaussian_sum};
use zerolab_core::formulas::*;
use zerolab_core::kernels::{fejer_eval, gaussian_eval, FejerWindow, GaussianWindow, IsolationWindow};
use zerolab_core::special::real_pow;
use zerolab_core::statistics::{sine_kernel_statistic, Weighting};
use zerolab_core::zeta::{find_zeros, ZeroRecord, ZeroSet, ZeroSource};
use zerolab_core::Complex64;

/// Zeros complete to 4300, enough for every window used here.
fn zeros() -> &'static ZeroSet {
    static ZEROS: OnceLock<ZeroSet> = OnceLock::new();
    ZEROS.get_or_init(|| find_zeros(10.0, 4300.0).unwrap())
}

fn nth_zero(n: usize) -> Complex64 {
    zeros().records()[n - 1].rho()
}

fn single_zero_set(gamma: f64) -> ZeroSet {
    ZeroSet::new(
        vec![ZeroRecord::on_line(gamma, 1e-15, ZeroSource::Imported)],
        0.0,
        9000.0,
    )
    .unwrap()
}

fn params(t: f64, alpha: f64, r: u64, s: u64) -> TheoremParams {
    TheoremParams::new(t, alpha, 1.0, classify_argument(r, s).unwrap()).unwrap()
}

fn assert_identity(what: &str, s: &SidePair) {
    assert!(
        s.within_budget(),
        "{what}: residual {:e} exceeds budget {:e} (zero {:?}, arith {:?})",
        s.residual(),
        s.truncation_budget() + s.envelope,
        s.zero_side,
        s.arithmetic_side
    );
}

fn assert_conjugate_symmetric(what: &str, s: &SidePair) {
    for v in [s.zero_side, s.arithmetic_side] {
        assert!(v.im.abs() < 1e-8 * v.re.abs(), "{what}: {v:?}");
    }
}

#[test]
fn landau_identity_at_t200() {
    let win = GaussianWindow::standard(200.0).unwrap();
    for x in [2.0, 3.0, 4.0, 5.0, 6.0, 2f64.sqrt(), 1.0] {
        let s = landau_sides(x, &win, zeros()).unwrap();
        assert_identity(&format!("x = {x}"), &s);
        assert!(s.residual() <= 1e-5, "x = {x}: {:e}", s.residual());
    }
}

#[test]
fn landau_at_one_counts_zeros_in_window() {
    let win = GaussianWindow::standard(200.0).unwrap();
    let s = landau_sides(1.0, &win, zeros()).unwrap();
    assert_conjugate_symmetric("landau x = 1", &s);
    let density = (200.0 / (2.0 * PI)).ln() / (2.0 * PI);
    assert!((s.zero_side.re - density).abs() < 0.01, "{}", s.zero_side.re);
}

#[test]
fn landau_rejects_nonpositive_x() {
    let win = GaussianWindow::standard(200.0).unwrap();
    assert!(landau_sides(0.0, &win, zeros()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn landau_identity_random(x in 0.5f64..30.0, t in 100.0f64..1000.0, narrow in any::<bool>()) {
        let delta = if narrow { 20.0 } else { t / t.ln() };
        let win = GaussianWindow::new(t, delta).unwrap();
        let s = landau_sides(x, &win, zeros()).unwrap();
        prop_assert!(s.within_budget(), "x={x} T={t} Δ={delta}: {:e} > {:e}", s.residual(), s.truncation_budget());
    }

    #[test]
    fn fejer_identity_random(x in 0.5f64..5.0, n in 20usize..200, alpha in 0.2f64..0.8) {
        let win = FejerWindow::new(nth_zero(n), alpha, 500.0).unwrap();
        let s = fejer_landau_sides(x, &win, zeros()).unwrap();
        prop_assert!(s.within_budget(), "x={x} n={n} α={alpha}: {:e} > {:e}", s.residual(), s.truncation_budget());
    }
}

#[test]
fn isolation_identity() {
    let win = IsolationWindow::new(nth_zero(50), 0.8).unwrap();
    let s = isolation_sides(2.0, &win, zeros()).unwrap();
    assert_identity("x = 2", &s);
    assert!(s.residual() < 1e-10);

    // a wide window reaches many zeros and shifts the prime sum onto n = 2
    let wide = IsolationWindow::new(nth_zero(50), 0.05).unwrap();
    let s = isolation_sides(2.0, &wide, zeros()).unwrap();
    assert_identity("M = 0.05", &s);
}

#[test]
fn isolation_at_one_is_real_for_the_first_zero() {
    let win = IsolationWindow::new(nth_zero(1), 1.0).unwrap();
    let s = isolation_sides(1.0, &win, zeros()).unwrap();
    assert_identity("x = 1", &s);
    // the zero side is dominated by ϖ(ρ) = M/√π
    assert!((s.zero_side.re - 1.0 / PI.sqrt()).abs() < 1e-3, "{:?}", s.zero_side);
}

#[test]
fn fejer_identity_at_hundredth_zero() {
    let win = FejerWindow::new(nth_zero(100), 0.5, 1000.0).unwrap();
    for x in [1.0, 2.0] {
        let s = fejer_landau_sides(x, &win, zeros()).unwrap();
        assert_identity(&format!("x = {x}"), &s);
        assert!(s.zero_truncation_bound > s.term_truncation_bound);
    }
}

#[test]
fn fejer_kernel_at_one_matches_closed_form() {
    let rho = nth_zero(10);
    let win = FejerWindow::with_q(rho, 7.0).unwrap();
    let z = Complex64::new(1.0, 0.0) - rho;
    let q = 7f64;
    let direct = ((real_pow(q, z / 2.0) - real_pow(q, -z / 2.0)) / z).powi(2);
    let v = fejer_eval(&win, Complex64::new(1.0, 0.0)).unwrap();
    assert!((v - direct).norm() < 1e-13 * direct.norm());
}

#[test]
fn log_weighted_landau() {
    let win = GaussianWindow::standard(500.0).unwrap();
    let s = log_weighted_landau_sides(4.0, &win, zeros()).unwrap();
    assert_identity("x = 4, T = 500", &s);
    assert!(s.arithmetic_side.re < 0.0);

    let s = log_weighted_landau_sides(6.0, &win, zeros()).unwrap();
    assert_eq!(s.arithmetic_side, Complex64::default());
    assert_identity("x = 6, T = 500", &s);

    assert!(log_weighted_landau_sides(1.0, &win, zeros()).is_err());
    assert!(log_weighted_landau_sides(20.0, &win, zeros()).is_err());
}

#[test]
fn log_weighted_disagreement_scales_as_inverse_square() {
    let r = |t: f64| {
        let win = GaussianWindow::standard(t).unwrap();
        log_weighted_landau_sides(2.0, &win, zeros()).unwrap().residual()
    };
    let ratio = r(200.0) / r(400.0);
    assert!((1.0..=16.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn gonek_sum() {
    let s = gonek_sharp_sum(4.0, 1000.0, zeros()).unwrap();
    assert!((s.arithmetic_side.re + 1000.0 / (2.0 * PI) * 2f64.ln()).abs() < 1e-12);
    assert_identity("x = 4", &s);

    let s = gonek_sharp_sum(6.0, 1000.0, zeros()).unwrap();
    assert_eq!(s.arithmetic_side.re, 0.0);
    assert_identity("x = 6", &s);

    let s = gonek_sharp_sum(2.0, 100.0, zeros()).unwrap();
    let reversed = zeros()
        .between(0.0, 100.0)
        .iter()
        .rev()
        .fold(Complex64::default(), |acc, r| acc + real_pow(2.0, r.rho()));
    assert!(
        (s.zero_side - reversed).norm() < 1e-12,
        "{:?} {reversed:?}",
        s.zero_side
    );
    assert_eq!(s.zeros_used, 29);

    assert!(gonek_sharp_sum(1.0, 100.0, zeros()).is_err());
}

#[test]
fn theorem1_single_zero() {
    let t = 500.0;
    let set = single_zero_set(t);
    let p = params(t, 0.3, 1, 1);
    let (z, _, _) = theorem1_zero_side(&p, &set).unwrap();
    let rho = Complex64::new(0.5, t);
    let expected = gaussian_eval(&p.gaussian().unwrap(), rho).unwrap() * 2.0 * PI.powf(1.5) * p.m();
    assert!((z - expected).norm() < 1e-12 * expected.norm(), "{z:?} {expected:?}");
}

#[test]
fn theorem1_threshold_stability() {
    let mut p = params(500.0, 0.3, 6, 1);
    let (a, bound, _) = theorem1_zero_side(&p, zeros()).unwrap();
    p.threshold = 1e-18;
    let (b, _, _) = theorem1_zero_side(&p, zeros()).unwrap();
    assert!((a - b).norm() < 1e-9 * a.norm(), "{a:?} {b:?}");
    assert!((a - b).norm() <= bound.max(1e-12 * a.norm()));
}

#[test]
fn theorem1_reduces_to_isolation_identities() {
    // ω-weighted sum of isolation sums, each replaced by its prime side
    for x in [1.0, 6.0] {
        let p = params(200.0, 0.3, x as u64, 1);
        let (z, bound, _) = theorem1_zero_side(&p, zeros()).unwrap();
        let win = p.gaussian().unwrap();
        let r = p.delta() * (1.0 / p.threshold).ln().sqrt();
        let mut reduced = Complex64::default();
        let mut reduced_bound = 0.0;
        for rec in zeros().between(p.t - r, p.t + r) {
            let iso = IsolationWindow::new(rec.rho(), p.m()).unwrap();
            let (v, b, _) = isolation_arithmetic_side(x, &iso).unwrap();
            let w = gaussian_eval(&win, rec.rho()).unwrap();
            reduced += w * v;
            reduced_bound += w.norm() * b;
        }
        let reduced = reduced * 2.0 * PI * PI;
        let tol = bound + 2.0 * PI * PI * reduced_bound + 1e-9 * z.norm();
        assert!(
            (z - reduced).norm() <= tol,
            "x = {x}: {z:?} vs {reduced:?} (tol {tol:e})"
        );
    }
}

#[test]
fn theorem1_two_prime_case_is_half_the_stated_value() {
    // The stated right-hand side for x = p^i q^j is twice what the
    // reduction above produces; the zero side settles near half of it.
    for t in [500.0, 1000.0] {
        let s = theorem1_sides(&params(t, 0.3, 6, 1), zeros()).unwrap();
        let ratio = s.zero_side.re / s.arithmetic_side.re;
        assert!((ratio - 0.5).abs() < 0.03, "T = {t}: ratio {ratio}");
    }
}

#[test]
fn theorem1_arithmetic_cases() {
    let z = zeros();
    let p = params(1000.0, 0.3, 6, 1);
    let m2 = p.m() * p.m();
    let g = |v: f64| (-v.ln().powi(2) / (4.0 * m2)).exp();
    let v = theorem1_arithmetic_side(&p, z).unwrap().value.re;
    assert!((v - 2f64.ln() * 3f64.ln() * (g(2.0) + g(3.0))).abs() < 1e-14);

    assert_eq!(
        theorem1_arithmetic_side(&params(1000.0, 0.3, 30, 1), z).unwrap().value,
        Complex64::default()
    );
    assert_eq!(
        theorem1_arithmetic_side(&params(1000.0, 0.3, 3, 2), z).unwrap().value,
        Complex64::default()
    );

    let p = params(1000.0, 0.3, 5, 1);
    let e = theorem1_arithmetic_side(&p, z).unwrap();
    let l5 = 5f64.ln();
    let expected = -l5 * (1.0 + g(5.0)) * 1000f64.ln();
    assert!((e.value.re - expected).abs() < 1e-12, "{} {expected}", e.value.re);
    assert!((e.uncertainty - l5 * l5 / 5.0).abs() < 1e-15);

    let mut p2 = p;
    p2.cofactor = PrimePowerCofactor::SquaredPower;
    let e2 = theorem1_arithmetic_side(&p2, z).unwrap();
    assert!((e2.value.re + l5 * (1.0 + g(25.0)) * 1000f64.ln()).abs() < 1e-12);
}

#[test]
fn theorem1_at_one() {
    let p = params(1000.0, 0.5, 1, 1);
    let s = theorem1_sides(&p, zeros()).unwrap();
    assert_conjugate_symmetric("theorem 1, x = 1", &s);
    let sq = lambda_sq_gaussian_sum(p.m()).unwrap().value.re;
    assert!(s.arithmetic_side.re > 2.0 * sq);
    assert_eq!(s.envelope, DEFAULT_C_UNC);
    assert!(s.within_budget(), "residual {}", s.residual());
}

#[test]
fn theorem2_single_zero() {
    let t = 1000.0;
    let set = single_zero_set(t);
    let p = params(t, 0.5, 2, 1);
    let (z, _, _) = theorem2_zero_side(&p, &set).unwrap();
    let rho = Complex64::new(0.5, t);
    let expected = gaussian_eval(&p.gaussian().unwrap(), rho).unwrap() * real_pow(2.0, rho) * p.log_q().powi(2);
    assert!((z - expected).norm() < 1e-6 * expected.norm(), "{z:?} {expected:?}");
}

#[test]
fn theorem2_threshold_stability() {
    let mut p = params(500.0, 0.3, 6, 1);
    let (a, _, _) = theorem2_zero_side(&p, zeros()).unwrap();
    p.threshold = 1e-18;
    let (b, _, _) = theorem2_zero_side(&p, zeros()).unwrap();
    assert!((a - b).norm() < 1e-9 * a.norm(), "{a:?} {b:?}");
}

#[test]
fn theorem2_at_one() {
    let p = params(1000.0, 0.5, 1, 1);
    let s = theorem2_sides(&p, zeros()).unwrap();
    assert!(s.zero_side.re > 0.0);
    assert_conjugate_symmetric("theorem 2, x = 1", &s);

    let lt = 1000f64.ln();
    let expected = (0.5 * lt).powi(3) / (6.0 * PI) + 0.5 / (2.0 * PI) * lt.powi(3);
    assert!((s.arithmetic_side.re - expected).abs() < 1e-12);

    let stat = sine_kernel_statistic(1000.0, 0.5, zeros(), Weighting::Gaussian).unwrap();
    let bridged = s.zero_side.re / p.log_q().powi(2);
    assert!(
        (bridged - stat.statistic).abs() < 1e-10 * stat.statistic,
        "{bridged} {}",
        stat.statistic
    );
}

#[test]
fn theorem2_arithmetic_cases() {
    let lt = 1000f64.ln();
    let ta = 0.5 * lt;
    let v = theorem2_arithmetic_side(&params(1000.0, 0.5, 6, 1)).value.re;
    let expected = 2f64.ln() * 3f64.ln() / (2.0 * PI) * ((ta - 2f64.ln()) + (ta - 3f64.ln()));
    assert!((v - expected).abs() < 1e-13);

    let v = theorem2_arithmetic_side(&params(1000.0, 0.5, 3, 2)).value.re;
    let expected = 3f64.ln() * 2f64.ln() / (2.0 * PI * 2.0) * ((ta - 3f64.ln()) + (ta - 2f64.ln()));
    assert!((v - expected).abs() < 1e-13);

    let v = theorem2_arithmetic_side(&params(1000.0, 0.5, 5, 1)).value.re;
    let expected = -lt * 5f64.ln() / (2.0 * PI) * (ta - (ta - 5f64.ln()));
    assert!((v - expected).abs() < 1e-13);

    // the indicator switches the term off once the power reaches T^α
    let v = theorem2_arithmetic_side(&params(1000.0, 0.2, 2 * 243, 1)).value.re;
    let expected = 2f64.ln() * 3f64.ln() / (2.0 * PI) * (0.2 * lt - 2f64.ln());
    assert!((v - expected).abs() < 1e-13);

    assert_eq!(theorem2_arithmetic_side(&params(1000.0, 0.5, 30, 1)).value.re, 0.0);
}

#[test]
fn theorem_warnings() {
    let p = params(1000.0, 0.6, 6, 1);
    assert_eq!(p.theorem1_warnings().len(), 2);
    assert_eq!(p.theorem2_warnings().len(), 1);
    let ok = TheoremParams::new(1000.0, 0.2, 0.5, classify_argument(6, 1).unwrap()).unwrap();
    assert!(ok.theorem1_warnings().is_empty());
    assert!(TheoremParams::new(5.0, 0.5, 1.0, classify_argument(1, 1).unwrap()).is_err());
}

#[test]
fn incomplete_zero_sets_are_rejected() {
    let short = find_zeros(10.0, 300.0).unwrap();
    let win = GaussianWindow::standard(200.0).unwrap();
    assert!(landau_sides(2.0, &win, &short).is_err());
    assert!(theorem1_zero_side(&params(200.0, 0.3, 6, 1), &short).is_err());
}

/// The same set cut lower, still complete up to `to`.
fn truncated(to: f64) -> ZeroSet {
    ZeroSet::new(zeros().between(0.0, to).to_vec(), 0.0, to).unwrap()
}

#[test]
fn results_do_not_depend_on_table_extent() {
    let short = truncated(3200.0);
    let p = params(1000.0, 0.5, 1, 1);
    assert_eq!(
        theorem2_sides(&p, &short).unwrap(),
        theorem2_sides(&p, zeros()).unwrap()
    );
    let a = sine_kernel_statistic(1000.0, 0.5, &short, Weighting::Gaussian).unwrap();
    let b = sine_kernel_statistic(1000.0, 0.5, zeros(), Weighting::Gaussian).unwrap();
    assert_eq!(a, b);
    let win = GaussianWindow::standard(200.0).unwrap();
    assert_eq!(
        landau_sides(2.0, &win, &short).unwrap(),
        landau_sides(2.0, &win, zeros()).unwrap()
    );
    let p = params(200.0, 0.3, 6, 1);
    assert_eq!(
        theorem1_sides(&p, &short).unwrap(),
        theorem1_sides(&p, zeros()).unwrap()
    );
}

#[test]
fn fejer_sum_height_is_fixed_by_the_centre() {
    let rho = Complex64::new(0.5, zeros().records()[99].ordinate);
    assert_eq!(fejer_sum_height(rho), FEJER_SUM_FLOOR);
    let win = FejerWindow::new(rho, 0.5, 1000.0).unwrap();
    assert!(fejer_landau_sides(2.0, &win, &truncated(3200.0)).is_err());
    assert!(fejer_landau_sides(2.0, &win, zeros()).unwrap().within_budget());
}
