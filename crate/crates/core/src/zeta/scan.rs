//! Zero location on the critical line by Gram-block sign-change scanning.
//!
//! A Gram point `g_n` is good when `(−1)^n Z(g_n) > 0`. Between two
//! consecutive good Gram points `g_j < g_k` Rosser's rule (which holds far
//! beyond the heights handled here) places exactly `k − j` zeros, so each
//! block has a known target count. Sign changes are searched at the Gram
//! points first, then on successively finer grids until the target is met.

use log::{debug, warn};
use rayon::prelude::*;

use super::eval::{gram_point, hardy_z, s_bound, zero_count_theoretic, MIN_HEIGHT};
use super::table::{ZeroRecord, ZeroSet, ZeroSource};
use crate::error::{Error, Result};

/// Largest height accepted by [`find_zeros`].
pub const MAX_HEIGHT: f64 = 1.0e4;

/// Width below which a bracket counts as refined.
const BRACKET_WIDTH: f64 = 1e-11;
/// Step for the central-difference simplicity witness.
const DERIV_STEP: f64 = 1e-5;
const MIN_SLOPE: f64 = 1e-6;
/// Each subdivision round halves every interval in the block.
const MAX_SUBDIVISIONS: u32 = 12;

/// `N(10) = 0` and `Z(10) < 0`, so `t = 10` behaves like a good Gram point
/// with index −1.
const ANCHOR_T: f64 = MIN_HEIGHT;
const ANCHOR_INDEX: i64 = -1;

#[derive(Debug, Clone, Copy)]
struct GramSample {
    index: i64,
    t: f64,
    z: f64,
}

impl GramSample {
    fn is_good(&self) -> bool {
        self.index == ANCHOR_INDEX || (self.z != 0.0 && (self.z > 0.0) == (self.index % 2 == 0))
    }
}

fn sample(index: i64) -> Result<GramSample> {
    let t = if index == ANCHOR_INDEX {
        ANCHOR_T
    } else {
        gram_point(index)
    };
    Ok(GramSample {
        index,
        t,
        z: hardy_z(t)?,
    })
}

/// Illinois (modified regula falsi) refinement of a sign-change bracket.
fn refine(mut a: f64, mut za: f64, mut b: f64, mut zb: f64) -> Result<(f64, f64)> {
    let mut side = 0i8;
    for _ in 0..200 {
        if b - a < BRACKET_WIDTH {
            break;
        }
        let mut c = (a * zb - b * za) / (zb - za);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let zc = hardy_z(c)?;
        if zc == 0.0 {
            return Ok((c, 0.5 * BRACKET_WIDTH));
        }
        if (zc > 0.0) == (za > 0.0) {
            a = c;
            za = zc;
            if side == -1 {
                zb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            zb = zc;
            if side == 1 {
                za *= 0.5;
            }
            side = 1;
        }
    }
    let mid = 0.5 * (a + b);
    Ok((mid, (0.5 * (b - a)).max(f64::EPSILON * mid)))
}

/// Sign-change brackets between consecutive grid points.
fn brackets(grid: &[(f64, f64)]) -> Vec<[(f64, f64); 2]> {
    grid.windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| [w[0], w[1]])
        .collect()
}

/// Locates the `hi.index − lo.index` zeros in the block `(lo.t, hi.t]`.
fn scan_block(points: &[GramSample]) -> Result<Vec<ZeroRecord>> {
    let lo = points[0];
    let hi = points[points.len() - 1];
    let target = (hi.index - lo.index) as usize;
    let mut grid: Vec<(f64, f64)> = points.iter().map(|p| (p.t, p.z)).collect();
    let mut found = brackets(&grid);
    let mut rounds = 0;
    while found.len() < target && rounds < MAX_SUBDIVISIONS {
        let mut finer = Vec::with_capacity(2 * grid.len());
        for w in grid.windows(2) {
            finer.push(w[0]);
            let mid = 0.5 * (w[0].0 + w[1].0);
            finer.push((mid, hardy_z(mid)?));
        }
        finer.push(grid[grid.len() - 1]);
        grid = finer;
        found = brackets(&grid);
        rounds += 1;
    }
    if rounds > 0 {
        debug!(
            "Gram block [{}, {}] needed {rounds} subdivision rounds",
            lo.index, hi.index
        );
    }
    if found.len() != target {
        return Err(Error::Completeness {
            lo: lo.t,
            hi: hi.t,
            expected: target,
            located: found.len(),
        });
    }
    let mut out = Vec::with_capacity(found.len());
    for [(a, za), (b, zb)] in found {
        let (gamma, radius) = refine(a, za, b, zb)?;
        let slope = (hardy_z(gamma + DERIV_STEP)? - hardy_z(gamma - DERIV_STEP)?) / (2.0 * DERIV_STEP);
        if slope.abs() <= MIN_SLOPE {
            warn!("zero at {gamma} has |Z'| = {slope:e}; it may not be simple");
        }
        out.push(ZeroRecord::on_line(gamma, radius, ZeroSource::Computed));
    }
    Ok(out)
}

/// Gram samples from a good point at or below `t_min` to a good point at or
/// above `t_max`.
fn gram_frame(t_min: f64, t_max: f64) -> Result<Vec<GramSample>> {
    // θ(t)/π − 1 is a lower estimate for the index of the Gram point below t
    let mut n = ((zero_count_theoretic(t_min)? - 2.0).floor() as i64).max(ANCHOR_INDEX);
    while n > ANCHOR_INDEX && gram_point(n) > t_min {
        n -= 1;
    }
    let mut first = sample(n)?;
    while !first.is_good() {
        first = sample(first.index - 1)?;
    }
    let n_end = {
        let mut m = (zero_count_theoretic(t_max)?.ceil() as i64).max(0);
        while gram_point(m) < t_max {
            m += 1;
        }
        m
    };
    let indices: Vec<i64> = ((first.index + 1)..=n_end).collect();
    let mut frame = vec![first];
    frame.extend(indices.par_iter().map(|&k| sample(k)).collect::<Result<Vec<_>>>()?);
    while !frame.last().is_none_or(GramSample::is_good) {
        let next = frame.last().unwrap().index + 1;
        frame.push(sample(next)?);
    }
    Ok(frame)
}

/// All zeros `1/2 + iγ` with `t_min < γ <= t_max`.
///
/// Blocks are scanned in parallel and concatenated in order. The result is
/// complete on `[t_min, t_max]`; a block whose sign changes fall short of
/// its Gram count is an error, as is a final count inconsistent with the
/// smooth counting function and the explicit `S(t)` bound.
pub fn find_zeros(t_min: f64, t_max: f64) -> Result<ZeroSet> {
    if !(t_min >= MIN_HEIGHT) || !(t_max <= MAX_HEIGHT) || !(t_min <= t_max) {
        return Err(Error::domain(
            "find_zeros",
            format!("need {MIN_HEIGHT} <= t_min <= t_max <= {MAX_HEIGHT}, got ({t_min}, {t_max})"),
        ));
    }
    if t_min == t_max {
        return ZeroSet::new(Vec::new(), t_min, t_max);
    }
    let frame = gram_frame(t_min, t_max)?;
    let mut starts: Vec<usize> = frame
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_good())
        .map(|(i, _)| i)
        .collect();
    starts.dedup();
    let blocks: Vec<&[GramSample]> = starts.windows(2).map(|w| &frame[w[0]..=w[1]]).collect();
    let located: Vec<Vec<ZeroRecord>> = blocks.par_iter().map(|b| scan_block(b)).collect::<Result<_>>()?;
    let records: Vec<ZeroRecord> = located
        .into_iter()
        .flatten()
        .filter(|r| r.ordinate > t_min && r.ordinate <= t_max)
        .collect();

    if t_min <= super::table::FIRST_ZERO_FLOOR {
        let smooth = zero_count_theoretic(t_max)?;
        let located = records.len() as f64;
        if (located - smooth).abs() > s_bound(t_max) + 1.0 {
            return Err(Error::Completeness {
                lo: t_min,
                hi: t_max,
                expected: smooth.round() as usize,
                located: records.len(),
            });
        }
    }
    ZeroSet::new(records, t_min, t_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_block_contains_first_zero() {
        let set = find_zeros(10.0, 50.0).unwrap();
        let ords = set.ordinates();
        assert!((ords[0] - 14.134_725_141_734_694).abs() < 1e-9);
        assert!((ords[ords.len() - 1] - 49.773_832_477_672_3).abs() < 1e-9);
        assert_eq!(ords.len(), 10);
    }

    #[test]
    fn empty_and_invalid_ranges() {
        assert!(find_zeros(50.0, 50.0).unwrap().is_empty());
        assert!(find_zeros(5.0, 50.0).is_err());
        assert!(find_zeros(60.0, 50.0).is_err());
        assert!(find_zeros(10.0, 2e4).is_err());
    }

    #[test]
    fn interior_window() {
        let set = find_zeros(95.0, 105.0).unwrap();
        let ords = set.ordinates();
        // 95.87, 98.83, 101.32, 103.73
        assert_eq!(ords.len(), 4);
        assert!((ords[1] - 98.831_194_218_193_69).abs() < 1e-9);
        assert!((ords[2] - 101.317_851_005_731_39).abs() < 1e-9);
    }

    #[test]
    fn illinois_on_a_line() {
        let (za, zb) = (hardy_z(20.0).unwrap(), hardy_z(22.0).unwrap());
        assert!(za * zb < 0.0);
        let (x, r) = refine(20.0, za, 22.0, zb).unwrap();
        // Z has its second zero at 21.022...
        assert!((x - 21.022_039_638_771_55).abs() < 1e-9, "{x}");
        assert!(r < 1e-10);
    }
}
