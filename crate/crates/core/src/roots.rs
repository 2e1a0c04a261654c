//! Bracketed scalar root finding (Brent's method) and sign-change scanning.

use roots::{find_root_brent, Convergency, SearchError};

use crate::error::{Error, Result};

/// Stopping rule for Brent's method: bracket width below a relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTolerance {
    pub relative: f64,
    pub absolute: f64,
    pub max_iter: usize,
}

impl RootTolerance {
    pub fn relative(eps: f64) -> Self {
        Self { relative: eps, absolute: f64::MIN_POSITIVE, max_iter: 500 }
    }
}

impl Convergency<f64> for RootTolerance {
    fn is_root_found(&mut self, y: f64) -> bool {
        y == 0.0
    }

    fn is_converged(&mut self, x1: f64, x2: f64) -> bool {
        (x1 - x2).abs() <= self.relative * x1.abs().max(x2.abs()) + self.absolute
    }

    fn is_iteration_limit_reached(&mut self, iter: usize) -> bool {
        iter >= self.max_iter
    }
}

/// Root of `f` in `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
pub fn find_bracketed_root(lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64, tol: RootTolerance) -> Result<f64> {
    let mut conv = tol;
    find_root_brent(lo, hi, &mut f, &mut conv).map_err(|e| match e {
        SearchError::NoBracketing => Error::Numerics(format!("[{lo}, {hi}] does not bracket a root")),
        other => Error::Numerics(format!("root search on [{lo}, {hi}] failed: {other}")),
    })
}

/// All roots of `f` located by sign changes between consecutive grid points,
/// refined by Brent's method. Grid points where `f` is exactly zero are
/// reported as roots. Non-finite samples break a bracket.
pub fn scan_roots(mut f: impl FnMut(f64) -> f64, grid: &[f64], tol: RootTolerance) -> Result<Vec<f64>> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut found = Vec::new();
    for i in 0..grid.len() {
        let fi = values[i];
        if fi == 0.0 {
            found.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() {
            let fj = values[i + 1];
            if fi.is_finite() && fj.is_finite() && fj != 0.0 && fi.signum() != fj.signum() {
                found.push(find_bracketed_root(grid[i], grid[i + 1], &mut f, tol)?);
            }
        }
    }
    Ok(found)
}

/// `count` points spaced geometrically on `[lo, hi]`, `0 < lo < hi`.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let last = (count.max(2) - 1) as f64;
    (0..count.max(2))
        .map(|i| match i {
            0 => lo,
            i if i as f64 == last => hi,
            i => (a + (b - a) * i as f64 / last).exp(),
        })
        .collect()
}

/// `count` equally spaced points on `[lo, hi]`.
pub fn lin_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let last = (count.max(2) - 1) as f64;
    (0..count.max(2)).map(|i| lo + (hi - lo) * i as f64 / last).collect()
}
