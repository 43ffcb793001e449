//! Compensated accumulation.
//!
//! Every long reduction in the crate goes through [`Accumulator`] (Neumaier's
//! variant of Kahan summation) so that results do not depend on how many
//! terms were folded in before a large cancellation. Parallel reductions
//! split work into fixed chunks and merge the chunk results with
//! [`pairwise`], which keeps the result independent of thread scheduling.

use std::iter::Sum;
use std::ops::AddAssign;

use num_complex::Complex64;
use rayon::prelude::*;

/// Chunk length for [`par_range_sum`].
pub const CHUNK: u64 = 1 << 14;

/// Running compensated sum of `f64` terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub const fn new() -> Self {
        Accumulator { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Folds another accumulator in, carrying its compensation term along.
    pub fn merge(&mut self, other: &Accumulator) {
        self.add(other.sum);
        self.add(other.comp);
    }
}

impl AddAssign<f64> for Accumulator {
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

impl Sum<f64> for Accumulator {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Accumulator::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of complex terms, one [`Accumulator`] per component.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexAccumulator {
    re: Accumulator,
    im: Accumulator,
}

impl ComplexAccumulator {
    pub const fn new() -> Self {
        ComplexAccumulator {
            re: Accumulator::new(),
            im: Accumulator::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn merge(&mut self, other: &ComplexAccumulator) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }
}

impl AddAssign<Complex64> for ComplexAccumulator {
    fn add_assign(&mut self, z: Complex64) {
        self.add(z);
    }
}

impl Sum<Complex64> for ComplexAccumulator {
    fn sum<I: Iterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexAccumulator::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Compensated sum of a slice of reals.
pub fn sum_f64(xs: &[f64]) -> f64 {
    xs.iter().copied().sum::<Accumulator>().value()
}

/// Compensated sum of a slice of complex numbers.
pub fn sum_complex(zs: &[Complex64]) -> Complex64 {
    zs.iter().copied().sum::<ComplexAccumulator>().value()
}

/// Pairwise (tree) reduction in a fixed order. The shape of the tree only
/// depends on `parts.len()`.
pub fn pairwise<T: Copy>(parts: &[T], zero: T, add: impl Fn(T, T) -> T + Copy) -> T {
    match parts.len() {
        0 => zero,
        1 => parts[0],
        n => {
            let (lo, hi) = parts.split_at(n / 2);
            add(pairwise(lo, zero, add), pairwise(hi, zero, add))
        }
    }
}

/// Pairwise merge of per-chunk complex accumulators.
pub fn merge_complex(parts: &[ComplexAccumulator]) -> Complex64 {
    pairwise(parts, ComplexAccumulator::new(), |mut a, b| {
        a.merge(&b);
        a
    })
    .value()
}

/// Pairwise merge of per-chunk real accumulators.
pub fn merge_real(parts: &[Accumulator]) -> f64 {
    pairwise(parts, Accumulator::new(), |mut a, b| {
        a.merge(&b);
        a
    })
    .value()
}

/// `Σ f(n)` for `n` in `lo..hi`, summed in fixed chunks in parallel and
/// merged pairwise. The result does not depend on the thread count.
pub fn par_range_sum<F>(lo: u64, hi: u64, f: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    if hi <= lo {
        return Complex64::default();
    }
    let chunks = (hi - lo).div_ceil(CHUNK);
    let parts: Vec<ComplexAccumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * CHUNK;
            let b = (a + CHUNK).min(hi);
            (a..b).map(&f).sum()
        })
        .collect();
    merge_complex(&parts)
}

/// Real counterpart of [`par_range_sum`].
pub fn par_range_sum_real<F>(lo: u64, hi: u64, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    if hi <= lo {
        return 0.0;
    }
    let chunks = (hi - lo).div_ceil(CHUNK);
    let parts: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * CHUNK;
            let b = (a + CHUNK).min(hi);
            (a..b).map(&f).sum()
        })
        .collect();
    merge_real(&parts)
}
