use proptest::prelude::*;
use zerolab_core::zeta::*;

/// Zeros of `Z` on `(a, b]` by plain bisection over a uniform grid.
fn bisection_zeros(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step).ceil() as usize;
    let mut out = Vec::new();
    let mut prev = (a, hardy_z(a).unwrap());
    for k in 1..=n {
        let t = (a + k as f64 * step).min(b);
        let z = hardy_z(t).unwrap();
        if (z > 0.0) != (prev.1 > 0.0) {
            let (mut lo, mut hi, zlo) = (prev.0, t, prev.1);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (hardy_z(mid).unwrap() > 0.0) == (zlo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = (t, z);
    }
    out
}

#[test]
fn scan_matches_bisection_to_100() {
    let set = find_zeros(10.0, 100.0).unwrap();
    let ords = set.ordinates();
    assert_eq!(ords.len(), 29);
    assert!(ords[0] > 14.134725 && ords[0] < 14.134726);
    for step in [0.05, 0.025] {
        let oracle = bisection_zeros(10.0, 100.0, step);
        assert_eq!(oracle.len(), 29);
        for (a, b) in ords.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
    for g in &ords {
        assert!(hardy_z(*g).unwrap().abs() < 1e-8);
    }
}

#[test]
fn count_matches_smooth_counting_function() {
    let set = find_zeros(10.0, 1000.0).unwrap();
    assert_eq!(set.len(), 649);
    let smooth = zero_count_theoretic(1000.0).unwrap();
    assert!((set.len() as f64 - smooth).abs() <= s_bound(1000.0) + 1.0);
}

#[test]
fn adjacent_scans_concatenate() {
    let whole = find_zeros(10.0, 400.0).unwrap();
    let lower = find_zeros(10.0, 250.0).unwrap();
    let upper = find_zeros(250.0, 400.0).unwrap();
    let joined = lower.extended_with(&upper).unwrap();
    assert_eq!(joined.len(), whole.len());
    for (a, b) in joined.ordinates().iter().zip(whole.ordinates()) {
        assert!((a - b).abs() < 1e-9);
    }
    assert_eq!(joined.complete_to(), 400.0);
}

#[test]
fn table_file_round_trip() {
    let set = find_zeros(10.0, 200.0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.txt");
    store_zeros(&set, &path).unwrap();
    let back = load_zeros(&path).unwrap();
    assert_eq!(back.len(), set.len());
    assert_eq!(back.complete_to(), set.complete_to());
    for (a, b) in back.ordinates().iter().zip(set.ordinates()) {
        assert_eq!(*a, b);
    }
    assert!(back.require_coverage(0.0, 201.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn z_is_real_rotation_of_zeta(t in 10.0f64..2000.0) {
        let parts = hardy_z_parts(t).unwrap();
        prop_assert!(parts.im.abs() < 1e-8 * parts.re.abs().max(1.0));
        prop_assert!((parts.re - hardy_z(t).unwrap()).abs() < 1e-12 * parts.re.abs().max(1.0));
    }

    #[test]
    fn scanned_windows_are_complete(lo in 20.0f64..1500.0, width in 1.0f64..60.0) {
        let set = find_zeros(lo, lo + width).unwrap();
        let oracle = bisection_zeros(lo, lo + width, 0.02);
        prop_assert_eq!(set.len(), oracle.len());
    }
}
