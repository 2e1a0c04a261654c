//! Scalar functions of the radial coordinate.
//!
//! A [`RadialProfile`] is defined on an open interval and can report its
//! value together with its first two derivatives. Profiles either carry
//! closed-form derivatives or obtain them from central differences of the
//! value map, using the step `h = max(eps^(1/3) * (1 + |r|), 1e-6)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Value and first two derivatives of a profile at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

/// How derivatives of a profile are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    ClosedForm,
    FiniteDifference,
}

/// Open interval `(lo, hi)`; `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo < 0.0 || lo >= hi {
            return Err(Error::Domain(format!("invalid radial interval ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub const fn half_line() -> Self {
        Self { lo: 0.0, hi: f64::INFINITY }
    }

    pub fn contains(&self, r: f64) -> bool {
        r > self.lo && r < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }
}

type JetFn = Arc<dyn Fn(f64) -> Jet + Send + Sync>;
type ValueFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Analytic(JetFn),
    Differenced(ValueFn),
}

/// A real function of `r` on an open interval.
#[derive(Clone)]
pub struct RadialProfile {
    domain: Interval,
    source: Source,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile").field("domain", &self.domain).field("mode", &self.mode()).finish()
    }
}

/// Central-difference step used for finite-difference profiles.
pub fn fd_step(r: f64) -> f64 {
    (f64::EPSILON.cbrt() * (1.0 + r.abs())).max(1e-6)
}

impl RadialProfile {
    /// Profile with closed-form derivatives.
    pub fn analytic(domain: Interval, f: impl Fn(f64) -> Jet + Send + Sync + 'static) -> Self {
        Self { domain, source: Source::Analytic(Arc::new(f)) }
    }

    /// Profile whose derivatives come from central differences of `f`.
    pub fn differenced(domain: Interval, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { domain, source: Source::Differenced(Arc::new(f)) }
    }

    pub fn constant(c: f64) -> Self {
        Self::analytic(Interval::half_line(), move |_| Jet::constant(c))
    }

    /// Natural cubic spline through `(radii[i], values[i])`, differentiated numerically.
    pub fn sampled(radii: &[f64], values: &[f64]) -> Result<Self> {
        let spline = CubicSpline::new(radii, values)?;
        let domain = Interval::new(radii[0], radii[radii.len() - 1])?;
        Ok(Self::differenced(domain, move |r| spline.eval(r)))
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn mode(&self) -> DerivativeMode {
        match self.source {
            Source::Analytic(_) => DerivativeMode::ClosedForm,
            Source::Differenced(_) => DerivativeMode::FiniteDifference,
        }
    }

    /// The same values with derivatives recomputed by central differences.
    pub fn to_finite_difference(&self) -> Self {
        match &self.source {
            Source::Differenced(_) => self.clone(),
            Source::Analytic(f) => {
                let f = Arc::clone(f);
                Self::differenced(self.domain, move |r| f(r).value)
            }
        }
    }

    /// Pointwise sum; closed-form only if both operands are.
    pub fn add(&self, other: &RadialProfile) -> Self {
        let domain = self.domain.intersect(&other.domain);
        match (&self.source, &other.source) {
            (Source::Analytic(f), Source::Analytic(g)) => {
                let (f, g) = (Arc::clone(f), Arc::clone(g));
                Self::analytic(domain, move |r| f(r) + g(r))
            }
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Self::differenced(domain, move |r| a.raw_value(r) + b.raw_value(r))
            }
        }
    }

    /// Multiply the profile by a constant.
    pub fn scale(&self, c: f64) -> Self {
        match &self.source {
            Source::Analytic(f) => {
                let f = Arc::clone(f);
                Self::analytic(self.domain, move |r| {
                    let j = f(r);
                    Jet::new(c * j.value, c * j.d1, c * j.d2)
                })
            }
            Source::Differenced(f) => {
                let f = Arc::clone(f);
                Self::differenced(self.domain, move |r| c * f(r))
            }
        }
    }

    fn raw_value(&self, r: f64) -> f64 {
        match &self.source {
            Source::Analytic(f) => f(r).value,
            Source::Differenced(f) => f(r),
        }
    }

    /// Value and derivatives at an interior point.
    pub fn jet(&self, r: f64) -> Result<Jet> {
        if !self.domain.contains(r) {
            return Err(Error::Domain(format!(
                "r = {r} outside profile domain ({}, {})",
                self.domain.lo, self.domain.hi
            )));
        }
        let jet = match &self.source {
            Source::Analytic(f) => f(r),
            Source::Differenced(f) => {
                let mut h = fd_step(r);
                // keep the stencil inside the domain
                let room = (r - self.domain.lo).min(self.domain.hi - r);
                if h >= room {
                    h = 0.5 * room;
                }
                let (fm, f0, fp) = (f(r - h), f(r), f(r + h));
                Jet::new(f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
            }
        };
        if !jet.is_finite() {
            return Err(Error::Numerics(format!("non-finite profile jet at r = {r}: {jet:?}")));
        }
        Ok(jet)
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        if !self.domain.contains(r) {
            return Err(Error::Domain(format!(
                "r = {r} outside profile domain ({}, {})",
                self.domain.lo, self.domain.hi
            )));
        }
        let v = self.raw_value(r);
        if !v.is_finite() {
            return Err(Error::Numerics(format!("non-finite profile value at r = {r}")));
        }
        Ok(v)
    }
}

/// Natural cubic spline on strictly increasing knots.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n < 4 || y.len() != n {
            return Err(Error::Parameter(format!(
                "spline needs at least 4 matching samples, got {} radii and {} values",
                n,
                y.len()
            )));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("sample radii must be strictly increasing".into()));
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::Parameter("non-finite sample".into()));
        }
        // Thomas algorithm for the second-derivative system, natural ends.
        let mut m = vec![0.0; n];
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0;
            let b = 2.0 * (h0 + h1);
            let c = h1;
            let d = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            let denom = b - a * c_prime[i - 1];
            c_prime[i] = c / denom;
            d_prime[i] = (d - a * d_prime[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d_prime[i] - c_prime[i] * m[i + 1];
        }
        Ok(Self { x: x.to_vec(), y: y.to_vec(), m })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.partition_point(|&xi| xi <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}
