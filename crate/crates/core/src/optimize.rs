//! Global maximization of possibly non-concave functions of one variable:
//! a uniform grid scan followed by golden-section refinement around every
//! local grid maximum.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct OptimizerConfig {
    grid_points: usize,
    refine_tol: f64,
    refine_max_iter: usize,
}

impl OptimizerConfig {
    pub fn new(grid_points: usize, refine_tol: f64, refine_max_iter: usize) -> Result<Self> {
        if grid_points < 64 {
            return Err(Error::InvalidConfig("grid_points must be at least 64"));
        }
        if refine_tol.is_nan() || refine_tol <= 0.0 {
            return Err(Error::InvalidConfig("refine_tol must be positive"));
        }
        Ok(OptimizerConfig { grid_points, refine_tol, refine_max_iter })
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    pub fn refine_tol(&self) -> f64 {
        self.refine_tol
    }

    pub fn refine_max_iter(&self) -> usize {
        self.refine_max_iter
    }

    /// Same refinement settings on a coarser grid.
    pub fn with_grid_points(&self, grid_points: usize) -> Self {
        OptimizerConfig { grid_points: grid_points.max(64), ..*self }
    }
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { grid_points: 16384, refine_tol: 1e-10, refine_max_iter: 200 }
    }
}

/// A maximum value and where it was found.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Extremum {
    pub value: f64,
    pub argmax: f64,
}

impl Extremum {
    fn better(self, other: Extremum) -> Extremum {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

const MAX_REFINED: usize = 32;

#[inline]
fn eval(f: &mut impl FnMut(f64) -> f64, x: f64) -> f64 {
    let y = f(x);
    if y.is_nan() {
        f64::NEG_INFINITY
    } else {
        y
    }
}

/// Golden-section search for a maximum inside `(a, b)`; the endpoints are
/// never evaluated.
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> Extremum {
    let inv_phi = (math::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval(&mut f, c);
    let mut fd = eval(&mut f, d);
    for _ in 0..max_iter {
        if b - a <= tol * (1.0 + c.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(&mut f, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(&mut f, d);
        }
    }
    if fc >= fd {
        Extremum { value: fc, argmax: c }
    } else {
        Extremum { value: fd, argmax: d }
    }
}

/// Maximizes `f` over `[lo, hi]`, or `(lo, hi]` when `open_lo` is set.
pub fn maximize(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, open_lo: bool, cfg: &OptimizerConfig) -> Extremum {
    assert!(lo <= hi);
    if lo == hi {
        return Extremum { value: eval(&mut f, lo), argmax: lo };
    }
    let n = cfg.grid_points;
    let first = usize::from(open_lo);
    let xs: Vec<f64> = (first..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| eval(&mut f, x)).collect();

    let mut peaks: Vec<usize> = (0..xs.len())
        .filter(|&i| {
            ys[i] > f64::NEG_INFINITY
                && (i == 0 || ys[i] >= ys[i - 1])
                && (i + 1 == xs.len() || ys[i] >= ys[i + 1])
        })
        .collect();
    peaks.sort_by(|&a, &b| ys[b].total_cmp(&ys[a]));
    peaks.truncate(MAX_REFINED);

    let mut best = match peaks.first() {
        Some(&i) => Extremum { value: ys[i], argmax: xs[i] },
        None => return Extremum { value: f64::NEG_INFINITY, argmax: hi },
    };
    for &i in &peaks {
        let a = if i == 0 { lo } else { xs[i - 1] };
        let b = if i + 1 == xs.len() { hi } else { xs[i + 1] };
        let refined = golden_section_max(&mut f, a, b, cfg.refine_tol, cfg.refine_max_iter);
        best = best.better(refined);
    }
    best
}
