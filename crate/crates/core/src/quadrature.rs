//! Composite Gauss–Legendre quadrature on radial intervals.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Area of the unit `k`-sphere in `R^(k+1)`.
pub fn sphere_area(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * PI,
        k => 2.0 * PI / (k as f64 - 1.0) * sphere_area(k - 2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Panels across the whole interval (before splitting at breakpoints).
    pub panels: usize,
    /// Gauss–Legendre points per panel.
    pub order: usize,
    /// Largest accepted change under panel doubling, relative to `max(1, |I|)`.
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { panels: 32, order: 10, tolerance: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    /// Change under panel doubling.
    pub error: f64,
}

/// A prepared rule; reuse it across many integrals.
#[derive(Debug, Clone)]
pub struct Quadrature {
    config: QuadratureConfig,
    rule: GaussLegendre,
}

impl Quadrature {
    pub fn new(config: QuadratureConfig) -> Result<Self> {
        let order = NonZeroUsize::new(config.order)
            .filter(|o| o.get() >= 2)
            .ok_or_else(|| Error::Parameter(format!("quadrature order must be at least 2, got {}", config.order)))?;
        if config.panels == 0 {
            return Err(Error::Parameter("quadrature needs at least one panel".into()));
        }
        if !(config.tolerance > 0.0) {
            return Err(Error::Parameter(format!("quadrature tolerance must be positive, got {}", config.tolerance)));
        }
        Ok(Self { config, rule: GaussLegendre::new(order) })
    }

    pub fn config(&self) -> QuadratureConfig {
        self.config
    }

    /// Panel edges on `[lo, hi]`: the interval is cut at `breakpoints` and each
    /// piece gets a share of `panels` proportional to its length.
    fn edges(lo: f64, hi: f64, breakpoints: &[f64], panels: usize) -> Vec<f64> {
        let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > lo && b < hi).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut knots = vec![lo];
        knots.extend(cuts);
        knots.push(hi);
        let total = hi - lo;
        let mut edges = vec![lo];
        for w in knots.windows(2) {
            let pieces = ((panels as f64 * (w[1] - w[0]) / total).ceil() as usize).max(1);
            for i in 1..pieces {
                edges.push(w[0] + (w[1] - w[0]) * i as f64 / pieces as f64);
            }
            edges.push(w[1]);
        }
        edges
    }

    fn sum(
        &self,
        lo: f64,
        hi: f64,
        breakpoints: &[f64],
        panels: usize,
        f: &(dyn Fn(f64) -> Result<f64> + Sync),
    ) -> Result<f64> {
        let edges = Self::edges(lo, hi, breakpoints, panels);
        let nodes = self.rule.as_node_weight_pairs();
        let parts: Vec<f64> = edges
            .par_windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
                let mut acc = 0.0;
                for &(x, wt) in nodes {
                    acc += wt * f(mid + half * x)?;
                }
                Ok(half * acc)
            })
            .collect::<Result<_>>()?;
        Ok(parts.iter().sum())
    }

    /// `int_lo^hi f` with the configured panels, checked against doubled panels.
    pub fn integrate(
        &self,
        lo: f64,
        hi: f64,
        breakpoints: &[f64],
        f: impl Fn(f64) -> Result<f64> + Sync,
    ) -> Result<Integral> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Parameter(format!("integration interval [{lo}, {hi}] is invalid")));
        }
        let coarse = self.sum(lo, hi, breakpoints, self.config.panels, &f)?;
        let fine = self.sum(lo, hi, breakpoints, 2 * self.config.panels, &f)?;
        let error = (fine - coarse).abs();
        if !fine.is_finite() {
            return Err(Error::Numerics(format!("integral over [{lo}, {hi}] is not finite")));
        }
        if error > self.config.tolerance * fine.abs().max(1.0) {
            return Err(Error::Numerics(format!(
                "quadrature over [{lo}, {hi}] changed by {error:e} under panel doubling"
            )));
        }
        Ok(Integral { value: fine, error })
    }
}
