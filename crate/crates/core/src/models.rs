//! Closed-form model data: the Reissner–Nordström family in area-radius and
//! isotropic coordinates, flat space, and the Euclidean unit ball with a
//! linear static potential.

use std::f64::consts::PI;

use serde::Serialize;

use crate::checks::{EntryStatus, EquationId, GridSummary, Location, ResidualEntry, ResidualReport};
use crate::error::{Error, Result};
use crate::geometry::{Dimension, SphericalStaticData};
use crate::profile::{Interval, Jet, RadialProfile};
use crate::roots::{find_bracketed_root, RootTolerance};

/// `C_n = sqrt(2(n-2)/(n-1))`, the normalisation between `E` and `Psi`.
pub fn charge_constant(n: Dimension) -> f64 {
    let n = n.as_f64();
    (2.0 * (n - 2.0) / (n - 1.0)).sqrt()
}

/// Relative tolerance used when deciding `m = |q|`.
pub const EXTREMAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SubExtremal,
    Extremal,
    SuperExtremal,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SubExtremal => "sub-extremal",
            Regime::Extremal => "extremal",
            Regime::SuperExtremal => "super-extremal",
        }
    }
}

/// Mass and charge of a Reissner–Nordström model (cosmological constant 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RNParameters {
    pub n: Dimension,
    pub m: f64,
    pub q: f64,
}

impl RNParameters {
    pub fn new(n: usize, m: f64, q: f64) -> Result<Self> {
        let n = Dimension::new(n)?;
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Parameter(format!("mass must be positive and finite, got {m}")));
        }
        if !q.is_finite() {
            return Err(Error::Parameter(format!("charge must be finite, got {q}")));
        }
        Ok(Self { n, m, q })
    }

    pub fn regime(&self) -> Regime {
        let gap = self.m - self.q.abs();
        if gap.abs() <= EXTREMAL_TOL * self.m {
            Regime::Extremal
        } else if gap > 0.0 {
            Regime::SubExtremal
        } else {
            Regime::SuperExtremal
        }
    }

    fn exponent(&self) -> f64 {
        self.n.as_f64() - 2.0
    }

    /// `V^2 = 1 - 2m/r^(n-2) + q^2/r^(2(n-2))` and its first two derivatives.
    ///
    /// With real roots `alpha, beta` of `u^2 - 2mu + q^2` the value is
    /// evaluated as `(1 - alpha x)(1 - beta x)`, `x = r^-(n-2)`, which keeps
    /// full relative accuracy next to the horizon.
    pub fn potential_squared(&self, r: f64) -> Jet {
        let p = self.exponent();
        let (m, q2) = (self.m, self.q * self.q);
        let x = r.powf(-p);
        let dx = -p * x / r;
        let ddx = p * (p + 1.0) * x / (r * r);
        let disc = m * m - q2;
        let (value, g) = if disc >= 0.0 {
            let root = disc.sqrt();
            let (alpha, beta) = (m + root, m - root);
            let (fa, fb) = (1.0 - alpha * x, 1.0 - beta * x);
            (fa * fb, -alpha * fb - beta * fa)
        } else {
            let c = 1.0 - m * x;
            (c * c - disc * x * x, -2.0 * m + 2.0 * q2 * x)
        };
        let d1 = g * dx;
        let d2 = 2.0 * q2 * dx * dx + g * ddx;
        Jet::new(value, d1, d2)
    }
}

/// Horizon radius `(m + sqrt(m^2 - q^2))^(1/(n-2))`; absent without a zero of `V`.
pub fn rn_horizon(p: &RNParameters) -> Option<f64> {
    match p.regime() {
        Regime::SuperExtremal => None,
        Regime::Extremal => Some(p.m.powf(1.0 / p.exponent())),
        Regime::SubExtremal => {
            let disc = p.m * p.m - p.q * p.q;
            Some((p.m + disc.sqrt()).powf(1.0 / p.exponent()))
        }
    }
}

/// Lower end of the maximal interval on which `V` is defined: the largest
/// zero of `V^2` (a root of `u^2 - 2mu + q^2` in `u = r^(n-2)`), or 0.
pub fn rn_r0(p: &RNParameters) -> f64 {
    rn_horizon(p).unwrap_or(0.0)
}

/// Area-radius Reissner–Nordström data: `A = V^-2`, `|E| = (n-2)|q|/(C_n r^(n-1))`,
/// `Psi = q/(C_n r^(n-2))` on `(r0, inf)`.
pub fn rn_data(p: &RNParameters) -> SphericalStaticData {
    let params = *p;
    let n = p.n;
    let np = p.exponent();
    let cn = charge_constant(n);
    let domain = Interval { lo: rn_r0(p), hi: f64::INFINITY };

    let a = RadialProfile::analytic(domain, move |r| {
        let w = params.potential_squared(r);
        Jet::new(
            1.0 / w.value,
            -w.d1 / (w.value * w.value),
            -w.d2 / (w.value * w.value) + 2.0 * w.d1 * w.d1 / (w.value * w.value * w.value),
        )
    });
    let v = RadialProfile::analytic(domain, move |r| {
        let w = params.potential_squared(r);
        let v = w.value.sqrt();
        Jet::new(v, w.d1 / (2.0 * v), w.d2 / (2.0 * v) - w.d1 * w.d1 / (4.0 * v * v * v))
    });
    let qa = p.q.abs();
    let emag = RadialProfile::analytic(domain, move |r| {
        let e = np * qa / (cn * r.powf(np + 1.0));
        Jet::new(e, -(np + 1.0) * e / r, (np + 1.0) * (np + 2.0) * e / (r * r))
    });
    let q = p.q;
    let psi = RadialProfile::analytic(domain, move |r| {
        let s = q / (cn * r.powf(np));
        Jet::new(s, -np * s / r, np * (np + 1.0) * s / (r * r))
    });
    SphericalStaticData::new(n, 0.0, a, v, emag)
        .expect("Reissner–Nordström profiles share one domain")
        .with_psi(psi)
        .with_field_sign(if q < 0.0 { -1.0 } else { 1.0 })
}

/// Euclidean space: `A = 1`, `V = 1`, `E = 0`, `Psi = 0`.
pub fn flat_data(n: Dimension) -> SphericalStaticData {
    SphericalStaticData::new(
        n,
        0.0,
        RadialProfile::constant(1.0),
        RadialProfile::constant(1.0),
        RadialProfile::constant(0.0),
    )
    .expect("constant profiles")
    .with_psi(RadialProfile::constant(0.0))
}

/// A point of the isotropic chart `g = phi^2 (ds^2 + s^2 g_S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsotropicPoint {
    pub s: f64,
    pub r: f64,
    pub phi: f64,
    /// `dphi/ds`.
    pub dphi: f64,
    pub v: f64,
    /// `|E|_g`.
    pub emag: f64,
    pub psi: f64,
}

/// The isotropic description of a Reissner–Nordström model, restricted to
/// the branch on which `r(s)` increases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsotropicChart {
    pub params: RNParameters,
    /// Lower end of the outer branch in `s`.
    pub s_min: f64,
}

impl IsotropicChart {
    pub fn new(p: &RNParameters) -> Self {
        let k = (p.m * p.m - p.q * p.q) / 4.0;
        let u_min = ((p.q.abs() - p.m) / 2.0).max(k.max(0.0).sqrt()).max(0.0);
        Self { params: *p, s_min: u_min.powf(1.0 / p.exponent()) }
    }

    pub fn point(&self, s: f64) -> Result<IsotropicPoint> {
        isotropic_map(&self.params, s)
    }

    pub fn r_of_s(&self, s: f64) -> Result<f64> {
        Ok(self.point(s)?.r)
    }

    pub fn inverse(&self, r: f64) -> Result<f64> {
        isotropic_inverse(&self.params, r)
    }

    fn profile(&self, pick: fn(&IsotropicPoint) -> f64) -> RadialProfile {
        let chart = *self;
        RadialProfile::differenced(Interval { lo: self.s_min, hi: f64::INFINITY }, move |s| {
            chart.point(s).map(|p| pick(&p)).unwrap_or(f64::NAN)
        })
    }

    pub fn potential_profile(&self) -> RadialProfile {
        self.profile(|p| p.v)
    }

    pub fn field_profile(&self) -> RadialProfile {
        self.profile(|p| p.emag)
    }

    pub fn electric_potential_profile(&self) -> RadialProfile {
        self.profile(|p| p.psi)
    }
}

/// Evaluate the isotropic chart at `s`.
pub fn isotropic_map(p: &RNParameters, s: f64) -> Result<IsotropicPoint> {
    let np = p.exponent();
    let cn = charge_constant(p.n);
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("isotropic radius must be positive, got {s}")));
    }
    let u = s.powf(np);
    let a = (p.m + p.q) / (2.0 * u);
    let b = (p.m - p.q) / (2.0 * u);
    let (fa, fb) = (1.0 + a, 1.0 + b);
    if !(fa > 0.0 && fb > 0.0) {
        return Err(Error::Domain(format!(
            "isotropic factors (1 + (m±q)/(2 s^(n-2))) = ({fa}, {fb}) must be positive at s = {s}"
        )));
    }
    let prod = fa * fb;
    let phi = prod.powf(1.0 / np);
    let r = s * phi;
    // d(a)/ds = -(n-2) a / s
    let dprod = -np / s * (a * fb + b * fa);
    let dphi = phi / (np * prod) * dprod;
    let lapse = 1.0 - a * b;
    let v = lapse / prod;
    // phi + s phi' = phi (1 - ab) / P, so the lapse cancels against dr/ds
    let e_coeff = np / cn * p.q * prod / (s.powf(np + 1.0) * phi.powf(2.0 * np + 2.0));
    let emag = (e_coeff * phi).abs();
    let psi = p.q / (cn * u * prod);
    Ok(IsotropicPoint { s, r, phi, dphi, v, emag, psi })
}

/// Invert `r(s)` on the outer branch by bracketed root finding.
///
/// The branch minimum `r(s_min)` is the horizon when one exists and 0
/// otherwise; `r` equal to it maps to `s_min`.
pub fn isotropic_inverse(p: &RNParameters, r: f64) -> Result<f64> {
    let chart = IsotropicChart::new(p);
    let r_min = rn_r0(p);
    if !r.is_finite() || !(r > 0.0) || r < r_min {
        return Err(Error::Domain(format!("r = {r} is below the outer-branch minimum {r_min}")));
    }
    if r - r_min <= 1e-12 * r && chart.s_min > 0.0 {
        return Ok(chart.s_min);
    }
    let residual = |s: f64| chart.r_of_s(s).map(|rs| rs - r).unwrap_or(f64::NAN);

    let mut hi = r.max(chart.s_min) * 2.0;
    while !(residual(hi) > 0.0) {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Numerics(format!("could not bracket the isotropic radius for r = {r}")));
        }
    }
    // lower bracket: step toward s_min until r(s) < r
    let mut lo = 0.5 * (chart.s_min + hi);
    for _ in 0..2000 {
        if residual(lo) < 0.0 {
            break;
        }
        lo = chart.s_min + 0.5 * (lo - chart.s_min);
    }
    if !(residual(lo) < 0.0) {
        return Err(Error::Numerics(format!("could not bracket the isotropic radius for r = {r}")));
    }
    find_bracketed_root(lo, hi, residual, RootTolerance::relative(1e-15))
}

/// `|phi - (((V + 1)^2 - C_n^2 Psi^2)/4)^(-1/(n-2))|` at `s`.
pub fn phi_identity_residual(p: &RNParameters, s: f64) -> Result<f64> {
    let pt = isotropic_map(p, s)?;
    let cn = charge_constant(p.n);
    let base = ((pt.v + 1.0).powi(2) - cn * cn * pt.psi * pt.psi) / 4.0;
    let rhs = base.powf(-1.0 / p.exponent());
    Ok((pt.phi - rhs).abs())
}

/// Euclidean unit ball in 3-space with static potential `V(x) = x . v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallStaticExample {
    pub v: [f64; 3],
    pub interior: Vec<[f64; 3]>,
    pub boundary: Vec<[f64; 3]>,
}

/// Exact quadratic test function `c + b.x + x^T H x / 2` on flat 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianQuadratic {
    pub constant: f64,
    pub gradient: [f64; 3],
    pub hessian: [[f64; 3]; 3],
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl CartesianQuadratic {
    pub fn linear(v: [f64; 3]) -> Self {
        Self { constant: 0.0, gradient: v, hessian: [[0.0; 3]; 3] }
    }

    pub fn value(&self, x: &[f64; 3]) -> f64 {
        let hx = self.hessian_times(x);
        self.constant + dot(&self.gradient, x) + 0.5 * dot(x, &hx)
    }

    fn hessian_times(&self, x: &[f64; 3]) -> [f64; 3] {
        let h = &self.hessian;
        [dot(&h[0], x), dot(&h[1], x), dot(&h[2], x)]
    }

    pub fn grad(&self, x: &[f64; 3]) -> [f64; 3] {
        let hx = self.hessian_times(x);
        [self.gradient[0] + hx[0], self.gradient[1] + hx[1], self.gradient[2] + hx[2]]
    }

    pub fn laplacian(&self) -> f64 {
        self.hessian[0][0] + self.hessian[1][1] + self.hessian[2][2]
    }
}

/// i-th element of the van der Corput sequence in `base`.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

impl BallStaticExample {
    pub const DEFAULT_SAMPLES: usize = 200;

    /// Halton points inside the ball and a Fibonacci lattice on the sphere.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        Self::with_samples(v, Self::DEFAULT_SAMPLES, Self::DEFAULT_SAMPLES)
    }

    pub fn with_samples(v: [f64; 3], interior: usize, boundary: usize) -> Result<Self> {
        if !(dot(&v, &v) > 0.0) {
            return Err(Error::Parameter("ball example needs a nonzero vector v".into()));
        }
        let mut inner = Vec::with_capacity(interior);
        let mut i = 1u64;
        while inner.len() < interior {
            let x = [
                2.0 * radical_inverse(i, 2) - 1.0,
                2.0 * radical_inverse(i, 3) - 1.0,
                2.0 * radical_inverse(i, 5) - 1.0,
            ];
            if dot(&x, &x) < 1.0 {
                inner.push(x);
            }
            i += 1;
        }
        let golden = PI * (3.0 - 5f64.sqrt());
        let outer = (0..boundary)
            .map(|k| {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / boundary as f64;
                let rho = (1.0 - z * z).sqrt();
                let t = golden * k as f64;
                let x = [rho * t.cos(), rho * t.sin(), z];
                let norm = dot(&x, &x).sqrt();
                [x[0] / norm, x[1] / norm, x[2] / norm]
            })
            .collect();
        Ok(Self { v, interior: inner, boundary: outer })
    }
}

fn worst_sample(vals: impl Iterator<Item = ([f64; 3], f64)>) -> (f64, Option<[f64; 3]>) {
    vals.fold(
        (0.0, None),
        |(m, at), (x, r)| {
            if at.is_none() || r.abs() > m {
                (r.abs().max(m), Some(x))
            } else {
                (m, at)
            }
        },
    )
}

/// Residual checks of the ball example together with the area of `{V = 0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallReport {
    pub residuals: ResidualReport,
    /// Area of the flat disk `{x . v = 0}` inside the ball.
    pub sigma_area: f64,
}

/// Verify the ball example pointwise: `Hess V = 0`, `Delta V = 0`, `Ric = 0`
/// and the master equation with `E = 0` inside, and the Robin condition
/// `dV/dnu = V H/(n-1)` with `nu = x`, `H = 2` on the sphere.
pub fn euclidean_ball_residuals(ex: &BallStaticExample) -> Result<BallReport> {
    const N: f64 = 3.0;
    const TOL: f64 = 1e-12;
    let pot = CartesianQuadratic::linear(ex.v);
    for x in &ex.interior {
        if dot(x, x) > 1.0 {
            return Err(Error::Domain(format!("interior sample {x:?} lies outside the unit ball")));
        }
    }
    for x in &ex.boundary {
        if (dot(x, x) - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("boundary sample {x:?} is not on the unit sphere")));
        }
    }

    let lap = pot.laplacian();
    // flat metric: Ric = 0 and R = 0
    let ric = [[0.0f64; 3]; 3];
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let max_component = |f: &dyn Fn(usize, usize) -> f64| {
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).fold(0.0f64, |m, (i, j)| m.max(f(i, j).abs()))
    };
    let e1 = worst_sample(ex.interior.iter().map(|x| {
        let v = pot.value(x);
        (*x, max_component(&|i, j| pot.hessian[i][j] - v * ric[i][j]))
    }));
    let e2 = worst_sample(ex.interior.iter().map(|x| (*x, lap)));
    let ae1 = worst_sample(ex.interior.iter().map(|x| {
        let v = pot.value(x);
        (*x, max_component(&|i, j| pot.hessian[i][j] - lap * delta(i, j) - v * ric[i][j]))
    }));
    let ne1 = worst_sample(ex.interior.iter().map(|x| (*x, (0..3).map(|i| ric[i][i]).sum::<f64>())));
    // on the unit sphere nu = x and H = n - 1
    let robin = worst_sample(ex.boundary.iter().map(|x| {
        let h = N - 1.0;
        (*x, dot(&pot.grad(x), x) - pot.value(x) * h / (N - 1.0))
    }));

    let entry = |tag: EquationId, (m, at): (f64, Option<[f64; 3]>)| ResidualEntry {
        tag,
        max_residual: m,
        worst_at: at.map(Location::Point),
        passed: m <= TOL,
        status: EntryStatus::Evaluated,
        skipped_points: 0,
        note: None,
    };
    let residuals = ResidualReport {
        grid: GridSummary::points(ex.interior.len(), ex.boundary.len()),
        tolerance: TOL,
        entries: vec![
            entry(EquationId::E1, e1),
            entry(EquationId::E2, e2),
            entry(EquationId::AE1, ae1),
            entry(EquationId::NE1, ne1),
            entry(EquationId::TE2, robin),
        ],
    };
    Ok(BallReport { residuals, sigma_area: PI })
}
