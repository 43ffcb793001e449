//! Adaptive Gauss–Kronrod quadrature, specialised to vertical-line
//! integrals `(1/2πi) ∫_{(c)} f(s) ds`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::ComplexAccumulator;

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of a quadrature: value and estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
}

/// Options for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Target absolute error over the whole interval.
    pub tolerance: f64,
    /// Width of the initial uniform panels; `None` starts from one panel.
    pub panel_width: Option<f64>,
    pub max_depth: u32,
}

impl QuadOptions {
    pub fn new(tolerance: f64) -> Self {
        QuadOptions {
            tolerance,
            panel_width: None,
            max_depth: 30,
        }
    }

    pub fn with_panel_width(mut self, width: f64) -> Self {
        self.panel_width = Some(width);
        self
    }
}

/// Returns the Kronrod value, its error estimate and the round-off floor.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut values = [(Complex64::default(), Complex64::default()); 7];
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[j] = (f1, f2);
        kron += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = WGK[7] * (fc - mean).norm();
    for (j, (f1, f2)) in values.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let kron = kron * half;
    let asc = asc * half.abs();
    let raw = ((kron - gauss * half).norm()).max(0.0);
    let err = if asc > 0.0 && raw > 0.0 {
        asc * (200.0 * raw / asc).powf(1.5).min(1.0)
    } else {
        raw
    };
    let floor = 50.0 * f64::EPSILON * asc.max(kron.norm());
    (kron, err.max(floor), floor)
}

struct Adaptive<'a, F> {
    f: &'a F,
    density: f64,
    max_depth: u32,
    acc: ComplexAccumulator,
    error: f64,
    roundoff: f64,
    panels_left: usize,
}

/// Cap on accepted panels per call, against runaway refinement.
const MAX_PANELS: usize = 200_000;

impl<F: Fn(f64) -> Complex64> Adaptive<'_, F> {
    fn panel(&mut self, a: f64, b: f64, depth: u32) {
        let (value, err, floor) = gk15(self.f, a, b);
        let local_tol = self.density * (b - a);
        if err <= local_tol.max(floor)
            || depth >= self.max_depth
            || self.panels_left == 0
            || (b - a) <= 1e-12 * a.abs().max(1.0)
        {
            self.acc.add(value);
            self.error += err;
            self.roundoff += floor;
            self.panels_left = self.panels_left.saturating_sub(1);
            return;
        }
        let mid = 0.5 * (a + b);
        self.panel(a, mid, depth + 1);
        self.panel(mid, b, depth + 1);
    }
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Quadrature> {
    if !(opts.tolerance > 0.0) {
        return Err(Error::domain(
            "tolerance",
            format!("{} is not positive", opts.tolerance),
        ));
    }
    if !(b > a) {
        return Ok(Quadrature {
            value: Complex64::default(),
            error: 0.0,
        });
    }
    let panels = match opts.panel_width {
        Some(w) if w > 0.0 => ((b - a) / w).ceil().max(1.0) as usize,
        _ => 1,
    };
    let mut run = Adaptive {
        f: &f,
        density: opts.tolerance / (b - a),
        max_depth: opts.max_depth,
        acc: ComplexAccumulator::new(),
        error: 0.0,
        roundoff: 0.0,
        panels_left: MAX_PANELS,
    };
    let width = (b - a) / panels as f64;
    for k in 0..panels {
        let lo = a + width * k as f64;
        let hi = if k + 1 == panels { b } else { a + width * (k + 1) as f64 };
        run.panel(lo, hi, 0);
    }
    // an error made only of round-off is the best binary64 can do
    if run.error > opts.tolerance && run.error > 2.0 * run.roundoff {
        return Err(Error::NonConvergence {
            tolerance: opts.tolerance,
            estimate: run.error,
        });
    }
    Ok(Quadrature {
        value: run.acc.value(),
        error: run.error,
    })
}

/// Window for a damped vertical-line integral: the line `Re s = abscissa`,
/// truncated to `|Im s − center| <= half_width · scale`.
#[derive(Debug, Clone, Copy)]
pub struct LineIntegralSpec {
    pub abscissa: f64,
    pub center: f64,
    /// Damping scale of the integrand (a Gaussian width, a Fejér period, ...).
    pub scale: f64,
    /// Cut-off in units of `scale`.
    pub half_width: f64,
    pub tolerance: f64,
    /// Initial panel width in units of `scale`.
    pub panel: f64,
    pub max_depth: u32,
}

/// Default abscissa for right-hand contours (any `c > 1` works).
pub const DEFAULT_ABSCISSA: f64 = 1.5;

impl LineIntegralSpec {
    pub fn new(abscissa: f64, center: f64, scale: f64, half_width: f64, tolerance: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::domain("half_width", format!("{half_width} is not positive")));
        }
        if !(tolerance > 0.0) {
            return Err(Error::domain("tolerance", format!("{tolerance} is not positive")));
        }
        if !(scale > 0.0) {
            return Err(Error::domain("scale", format!("{scale} is not positive")));
        }
        Ok(LineIntegralSpec {
            abscissa,
            center,
            scale,
            half_width,
            tolerance,
            panel: 0.5,
            max_depth: 30,
        })
    }

    pub fn with_panel(mut self, panel: f64) -> Self {
        self.panel = panel;
        self
    }

    pub fn lower(&self) -> f64 {
        self.center - self.half_width * self.scale
    }

    pub fn upper(&self) -> f64 {
        self.center + self.half_width * self.scale
    }
}

/// `(1/2πi) ∫_{(c)} f(s) ds`, truncated to the spec's window.
///
/// With `s = c + it` the integral is `(1/2π) ∫ f(c + it) dt`.
pub fn damped_line_integral<F>(f: F, spec: &LineIntegralSpec) -> Result<Quadrature>
where
    F: Fn(Complex64) -> Complex64,
{
    let c = spec.abscissa;
    // the 1/2π factor is folded into the tolerance
    let opts = QuadOptions {
        tolerance: spec.tolerance * 2.0 * PI,
        panel_width: Some(spec.panel * spec.scale),
        max_depth: spec.max_depth,
    };
    let q = integrate(|t| f(Complex64::new(c, t)), spec.lower(), spec.upper(), opts)?;
    Ok(Quadrature {
        value: q.value / (2.0 * PI),
        error: q.error / (2.0 * PI),
    })
}
