//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite, semi-infinite
//! and simple two-dimensional regions.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and budget for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && abs_tol > 0.0) || max_subdivisions < 1 {
            return Err(Error::Argument(format!(
                "quadrature tolerances must be positive and the budget at least 1 \
                 (rel_tol={rel_tol}, abs_tol={abs_tol}, max_subdivisions={max_subdivisions})"
            )));
        }
        Ok(QuadConfig {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }

    fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// An integral estimate together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite(format!("integrand returned {y} at x = {x:e}")))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Panel> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = eval(f, center)?;

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { lo, hi, value, error })
}

/// Integrates `f` over `[lo, hi]`.
///
/// Integrable endpoint singularities are allowed: the rule never samples the
/// endpoints themselves.
pub fn quad_finite<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, config: &QuadConfig) -> Result<QuadEstimate> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::Argument(format!("finite bounds required, got [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(QuadEstimate {
            value: 0.0,
            abs_error: 0.0,
            subdivisions: 0,
        });
    }
    if lo > hi {
        let est = quad_finite(f, hi, lo, config)?;
        return Ok(QuadEstimate {
            value: -est.value,
            ..est
        });
    }

    let first = gk15(&f, lo, hi)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;

    loop {
        if total_err <= config.tolerance_for(total) {
            break;
        }
        if subdivisions >= config.max_subdivisions {
            return Err(Error::NonConvergence {
                estimate: total,
                abs_error: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Panel cannot be bisected further in floating point.
            return Err(Error::NonConvergence {
                estimate: total,
                abs_error: total_err,
                subdivisions,
            });
        }
        let left = gk15(&f, worst.lo, mid)?;
        let right = gk15(&f, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;

        if subdivisions % 64 == 0 {
            // Resum to keep the running totals free of drift.
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }

    let value = heap.iter().map(|p| p.value).sum();
    let abs_error = heap.iter().map(|p| p.error).sum();
    Ok(QuadEstimate {
        value,
        abs_error,
        subdivisions,
    })
}

/// Integrates `f` over `[lo, ∞)` through `x = lo + u / (1 - u)`.
pub fn quad_semi_infinite<F: Fn(f64) -> f64>(f: F, lo: f64, config: &QuadConfig) -> Result<QuadEstimate> {
    quad_semi_infinite_scaled(f, lo, 1.0, config)
}

/// Same as [`quad_semi_infinite`] with `x = lo + scale * u / (1 - u)`, which
/// places half of the unit interval on `[lo, lo + scale]`.
pub fn quad_semi_infinite_scaled<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    scale: f64,
    config: &QuadConfig,
) -> Result<QuadEstimate> {
    if !(lo.is_finite() && scale.is_finite() && scale > 0.0) {
        return Err(Error::Argument(format!(
            "semi-infinite quadrature needs a finite lower bound and positive scale (lo={lo}, scale={scale})"
        )));
    }
    let g = |u: f64| {
        let w = 1.0 - u;
        let x = lo + scale * u / w;
        if x.is_infinite() {
            return 0.0;
        }
        let y = f(x);
        if y == 0.0 {
            0.0
        } else {
            y * scale / (w * w)
        }
    };
    quad_finite(g, 0.0, 1.0, config)
}

/// Integration regions on the positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region2d {
    /// `{0 < x1 < x2}`; `scale` sets the semi-infinite substitution.
    Below { scale: f64 },
    /// `{0 < x2 < x1}`.
    Above { scale: f64 },
    /// `[lo1, hi1] x [lo2, hi2]`.
    Rectangle { lo1: f64, hi1: f64, lo2: f64, hi2: f64 },
}

/// Iterated adaptive quadrature of `f(x1, x2)` over a [`Region2d`].
///
/// The inner integrals are solved to a tenth of the outer tolerances.
pub fn quad_2d_region<F: Fn(f64, f64) -> f64>(f: F, region: Region2d, config: &QuadConfig) -> Result<QuadEstimate> {
    let inner_cfg = QuadConfig {
        rel_tol: config.rel_tol * 0.1,
        abs_tol: config.abs_tol * 0.1,
        max_subdivisions: config.max_subdivisions,
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner = |lo: f64, hi: f64, g: &dyn Fn(f64) -> f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match quad_finite(g, lo, hi, &inner_cfg) {
            Ok(est) => est.value,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };

    let outer = match region {
        Region2d::Below { scale } => quad_semi_infinite_scaled(
            |x2| inner(0.0, x2, &|x1| f(x1, x2)),
            0.0,
            scale,
            config,
        ),
        Region2d::Above { scale } => quad_semi_infinite_scaled(
            |x1| inner(0.0, x1, &|x2| f(x1, x2)),
            0.0,
            scale,
            config,
        ),
        Region2d::Rectangle { lo1, hi1, lo2, hi2 } => {
            quad_finite(|x1| inner(lo2, hi2, &|x2| f(x1, x2)), lo1, hi1, config)
        }
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    outer
}
