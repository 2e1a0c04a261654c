//! The functional
//!
//! `F[g] = int V (R_g - 6|E|_g^2) dv_{g_o} + 4 int V |E|_g^2 dv_g + 2 int_{dM} V H_g ds_{g_o}`
//!
//! on an annulus `r1 <= r <= r2`, its finite-difference first variation
//! along compactly supported radial metric perturbations, the Euler–Lagrange
//! pairing, the Pohozaev-type identity for `X = grad V`, and the surface
//! gravity of Reissner–Nordström horizons.
//!
//! The measures `dv_{g_o}` and `ds_{g_o}` are those of the base metric and do
//! not vary. The electric field vector is held fixed, so
//! `|E|^2_{g_eps} = |E|^2 (1 + eps b_A)`.

use serde::Serialize;

use crate::checks::master_residual;
use crate::error::{Error, Result};
use crate::geometry::{
    hessian_radial, ricci_radial, scalar_curvature_derivative, FrameTensor2, SphericalStaticData, WarpedJet,
};
use crate::models::{rn_horizon, RNParameters, Regime};
use crate::profile::Jet;
use crate::quadrature::{sphere_area, Quadrature};

/// Which metric components a perturbation scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationMode {
    /// `A dr^2 -> A (1 + eps b) dr^2`.
    Radial,
    /// `r^2 g_S -> r^2 (1 + eps b) g_S`.
    Tangential,
    Both,
}

/// `h = eps b(r) (c_A A dr^2 + c_T r^2 g_S)` with `b = scale (1 - t^2)^3`,
/// `t = (r - center)/half_width`, supported in `|t| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Perturbation {
    pub center: f64,
    pub half_width: f64,
    pub mode: PerturbationMode,
    pub scale: f64,
}

impl Perturbation {
    pub fn new(center: f64, half_width: f64, mode: PerturbationMode) -> Result<Self> {
        if !(half_width > 0.0 && center.is_finite() && half_width.is_finite()) {
            return Err(Error::Parameter(format!(
                "bump needs a finite center and positive width, got {center}, {half_width}"
            )));
        }
        Ok(Self { center, half_width, mode, scale: 1.0 })
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }

    fn coefficients(&self) -> (f64, f64) {
        match self.mode {
            PerturbationMode::Radial => (1.0, 0.0),
            PerturbationMode::Tangential => (0.0, 1.0),
            PerturbationMode::Both => (1.0, 1.0),
        }
    }

    /// The bump `b` with two derivatives.
    pub fn bump(&self, r: f64) -> Jet {
        let t = (r - self.center) / self.half_width;
        if t.abs() >= 1.0 {
            return Jet::constant(0.0);
        }
        let w = self.half_width;
        let s = 1.0 - t * t;
        Jet::new(
            self.scale * s * s * s,
            self.scale * (-6.0 * t * s * s) / w,
            self.scale * (-6.0 * s * s + 24.0 * t * t * s) / (w * w),
        )
    }

    /// `(b_A, b_T)` as jets: `h` per unit `eps` has frame components `(b_A, b_T)`.
    fn component_jets(&self, r: f64) -> (Jet, Jet) {
        let b = self.bump(r);
        let (ca, ct) = self.coefficients();
        let mul = |c: f64| Jet::new(c * b.value, c * b.d1, c * b.d2);
        (mul(ca), mul(ct))
    }

    /// Frame components of `h` per unit `eps`.
    pub fn frame_components(&self, r: f64) -> FrameTensor2 {
        let (a, t) = self.component_jets(r);
        FrameTensor2::new(a.value, t.value)
    }

    /// `sup_r |h|_g` per unit `eps`.
    pub fn norm(&self, n: usize) -> f64 {
        let (ca, ct) = self.coefficients();
        self.scale.abs() * (ca * ca + (n as f64 - 1.0) * ct * ct).sqrt()
    }

    /// Amplitudes `|eps| < max_amplitude()` keep the perturbed metric positive definite.
    pub fn max_amplitude(&self) -> f64 {
        let (ca, ct) = self.coefficients();
        let peak = self.scale.abs() * ca.max(ct);
        if peak == 0.0 {
            f64::INFINITY
        } else {
            0.5 / peak
        }
    }
}

/// An annulus `[r1, r2]` with both boundary spheres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annulus {
    pub r1: f64,
    pub r2: f64,
}

impl Annulus {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1.is_finite() && r2.is_finite() && 0.0 < r1 && r1 < r2) {
            return Err(Error::Parameter(format!("annulus needs 0 < r1 < r2, got [{r1}, {r2}]")));
        }
        Ok(Self { r1, r2 })
    }

    fn check(&self, data: &SphericalStaticData) -> Result<()> {
        data.check_interior(self.r1)?;
        data.check_interior(self.r2)
    }
}

/// Warped-metric data of `g_eps` at `r`.
fn perturbed_warped(data: &SphericalStaticData, pert: Option<(&Perturbation, f64)>, r: f64) -> Result<WarpedJet> {
    let base = data.warped(r)?;
    let Some((p, eps)) = pert else { return Ok(base) };
    let (ba, bt) = p.component_jets(r);
    let fa = 1.0 + eps * ba.value;
    let ft = 1.0 + eps * bt.value;
    if !(fa > 0.0 && ft > 0.0) {
        return Err(Error::Parameter(format!("perturbed metric is not positive definite at r = {r}")));
    }
    let s = ft.sqrt();
    let ds = eps * bt.d1 / (2.0 * s);
    let dds = eps * bt.d2 / (2.0 * s) - eps * eps * bt.d1 * bt.d1 / (4.0 * s * s * s);
    Ok(WarpedJet {
        a: base.a * fa,
        da: base.da * fa + base.a * eps * ba.d1,
        w: r * s,
        dw: s + r * ds,
        ddw: 2.0 * ds + r * dds,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub bulk: f64,
    pub boundary: f64,
    /// Change of the bulk integral under panel doubling.
    pub quadrature_error: f64,
}

/// `F[g_eps]` on the annulus; `pert = None` evaluates the base metric.
pub fn evaluate_functional(
    data: &SphericalStaticData,
    annulus: Annulus,
    pert: Option<(&Perturbation, f64)>,
    quad: &Quadrature,
) -> Result<FunctionalValue> {
    annulus.check(data)?;
    let omega = sphere_area(data.dimension().get() - 1);
    if let Some((p, eps)) = pert {
        if eps.abs() >= p.max_amplitude() {
            return Err(Error::Parameter(format!("amplitude {eps} exceeds {}", p.max_amplitude())));
        }
    }
    let breaks: Vec<f64> = pert.map(|(p, _)| vec![p.support().0, p.support().1]).unwrap_or_default();

    let bulk = quad.integrate(annulus.r1, annulus.r2, &breaks, |r| functional_density(data, pert, r))?;
    // outward normal: +e_r on the outer sphere, -e_r on the inner one
    let flux = |r: f64| functional_flux(data, pert, r);
    let boundary = 2.0 * (flux(annulus.r2)? - flux(annulus.r1)?);
    Ok(FunctionalValue {
        value: omega * (bulk.value + boundary),
        bulk: omega * bulk.value,
        boundary: omega * boundary,
        quadrature_error: omega * bulk.error,
    })
}

/// `<EL, h>` at `r` per unit `eps`, where the Euler–Lagrange tensor is the
/// master-equation residual `Hess V - (Delta V) g - V Ric - 2V(E (x) E - |E|^2 g)`.
pub fn euler_lagrange_density(data: &SphericalStaticData, pert: &Perturbation, r: f64) -> Result<f64> {
    let el = master_residual(data, r)?;
    Ok(el.dot(&pert.frame_components(r), data.dimension()))
}

/// `int <EL, h> dv_g` over the annulus.
pub fn euler_lagrange_integral(
    data: &SphericalStaticData,
    annulus: Annulus,
    pert: &Perturbation,
    quad: &Quadrature,
) -> Result<f64> {
    annulus.check(data)?;
    let n = data.dimension();
    let k = n.as_f64() - 1.0;
    let (lo, hi) = pert.support();
    let integral = quad.integrate(annulus.r1, annulus.r2, &[lo, hi], |r| {
        if r <= lo || r >= hi {
            return Ok(0.0);
        }
        let a = data.metric_jet(r)?.value;
        Ok(euler_lagrange_density(data, pert, r)? * a.sqrt() * r.powf(k))
    })?;
    Ok(sphere_area(n.get() - 1) * integral.value)
}

/// Amplitudes used for the Richardson estimate.
pub const RICHARDSON_EPS: [f64; 2] = [1e-3, 5e-4];
/// Amplitudes used for the convergence slope.
pub const SLOPE_EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeSample {
    pub epsilon: f64,
    /// `(F(eps) - F(-eps)) / (2 eps)`.
    pub derivative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalityEstimate {
    pub base_value: f64,
    pub ladder: Vec<DerivativeSample>,
    /// Richardson extrapolation of the central difference to `eps -> 0`.
    pub richardson: f64,
    /// Least-squares slope of `log |D(eps)|` against `log eps`; absent when
    /// some `D(eps)` vanishes exactly.
    pub slope: Option<f64>,
    /// `int <EL, h> dv`.
    pub el_integral: f64,
    pub perturbation_norm: f64,
    /// `tolerance * perturbation_norm`.
    pub threshold: f64,
    /// `|richardson| <= threshold`.
    pub critical: bool,
    /// `|richardson - el_integral|`.
    pub gradient_mismatch: f64,
    pub gradient_tolerance: f64,
    pub gradient_check: bool,
}

/// Bulk integrand of `F` per unit sphere area at `r`.
fn functional_density(data: &SphericalStaticData, pert: Option<(&Perturbation, f64)>, r: f64) -> Result<f64> {
    let n = data.dimension();
    let k = n.as_f64() - 1.0;
    let base = data.warped(r)?;
    let g = perturbed_warped(data, pert, r)?;
    let v = data.potential_jet(r)?.value;
    let e2_eps = data.field_norm_sq(r)? * g.a / base.a;
    let frozen = base.a.sqrt() * r.powf(k);
    let varying = g.a.sqrt() * g.w.powf(k);
    Ok(v * (g.scalar_curvature(n) - 6.0 * e2_eps) * frozen + 4.0 * v * e2_eps * varying)
}

/// Boundary integrand `V H r^(n-1)` of `F` per unit sphere area.
fn functional_flux(data: &SphericalStaticData, pert: Option<(&Perturbation, f64)>, r: f64) -> Result<f64> {
    let g = perturbed_warped(data, pert, r)?;
    Ok(data.potential_jet(r)?.value * g.mean_curvature(data.dimension()) * r.powf(data.dimension().as_f64() - 1.0))
}

/// `(F(eps) - F(-eps)) / (2 eps)`, integrating the pointwise difference of
/// the two integrands on one set of nodes so that the common part cancels
/// before summation.
pub fn central_difference(
    data: &SphericalStaticData,
    annulus: Annulus,
    pert: &Perturbation,
    quad: &Quadrature,
    eps: f64,
) -> Result<f64> {
    annulus.check(data)?;
    if eps.abs() >= pert.max_amplitude() || eps == 0.0 {
        return Err(Error::Parameter(format!("amplitude {eps} must be nonzero and below {}", pert.max_amplitude())));
    }
    let omega = sphere_area(data.dimension().get() - 1);
    let (lo, hi) = pert.support();
    let bulk = quad.integrate(annulus.r1, annulus.r2, &[lo, hi], |r| {
        if r <= lo || r >= hi {
            return Ok(0.0);
        }
        Ok(functional_density(data, Some((pert, eps)), r)? - functional_density(data, Some((pert, -eps)), r)?)
    })?;
    let flux = |r: f64| -> Result<f64> {
        Ok(functional_flux(data, Some((pert, eps)), r)? - functional_flux(data, Some((pert, -eps)), r)?)
    };
    let boundary = 2.0 * (flux(annulus.r2)? - flux(annulus.r1)?);
    Ok(omega * (bulk.value + boundary) / (2.0 * eps))
}

/// Finite-difference first variation of `F` along `pert`, compared with the
/// Euler–Lagrange pairing. `tolerance` is scaled by the perturbation norm.
pub fn criticality_test(
    data: &SphericalStaticData,
    annulus: Annulus,
    pert: &Perturbation,
    quad: &Quadrature,
    tolerance: f64,
) -> Result<CriticalityEstimate> {
    let (lo, hi) = pert.support();
    if !(annulus.r1 < lo && hi < annulus.r2) {
        return Err(Error::Parameter(format!(
            "bump support [{lo}, {hi}] must lie inside the open annulus ({}, {})",
            annulus.r1, annulus.r2
        )));
    }
    let base_value = evaluate_functional(data, annulus, None, quad)?.value;
    let mut ladder = Vec::new();
    for eps in SLOPE_EPS.iter().chain(RICHARDSON_EPS.iter().filter(|e| !SLOPE_EPS.contains(e))) {
        ladder
            .push(DerivativeSample { epsilon: *eps, derivative: central_difference(data, annulus, pert, quad, *eps)? });
    }
    let at = |eps: f64| ladder.iter().find(|s| s.epsilon == eps).map(|s| s.derivative).unwrap();
    let (d1, d2) = (at(RICHARDSON_EPS[0]), at(RICHARDSON_EPS[1]));
    let ratio = RICHARDSON_EPS[0] / RICHARDSON_EPS[1];
    let richardson = (ratio * ratio * d2 - d1) / (ratio * ratio - 1.0);

    let points: Vec<(f64, f64)> = SLOPE_EPS.iter().map(|&e| (e.ln(), at(e).abs())).collect();
    let slope = if points.iter().all(|&(_, d)| d > 0.0) { Some(fit_slope(&points)) } else { None };

    let el_integral = euler_lagrange_integral(data, annulus, pert, quad)?;
    let norm = pert.norm(data.dimension().get());
    let threshold = tolerance * norm;
    let gradient_mismatch = (richardson - el_integral).abs();
    let gradient_tolerance = quad.config().tolerance * el_integral.abs().max(1.0) + threshold;
    Ok(CriticalityEstimate {
        base_value,
        ladder,
        richardson,
        slope,
        el_integral,
        perturbation_norm: norm,
        threshold,
        critical: richardson.abs() <= threshold,
        gradient_mismatch,
        gradient_tolerance,
        gradient_check: gradient_mismatch <= gradient_tolerance,
    })
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PohozaevResult {
    /// `(n-2)/(2n) int X(R) dv`.
    pub lhs: f64,
    /// `-1/2 int <L_X g, Ric^0> dv + int_{dM} Ric^0(X, N) ds`.
    pub rhs: f64,
    pub residual: f64,
}

/// Both sides of the Pohozaev-type identity with `X = grad V` on the annulus.
pub fn pohozaev_residual(data: &SphericalStaticData, annulus: Annulus, quad: &Quadrature) -> Result<PohozaevResult> {
    annulus.check(data)?;
    let n = data.dimension();
    let nf = n.as_f64();
    let k = nf - 1.0;
    let omega = sphere_area(n.get() - 1);

    let lhs = quad.integrate(annulus.r1, annulus.r2, &[], |r| {
        let a = data.metric_jet(r)?.value;
        let dv = data.potential_jet(r)?.d1;
        Ok(dv / a * scalar_curvature_derivative(data, r)? * a.sqrt() * r.powf(k))
    })?;
    let bulk = quad.integrate(annulus.r1, annulus.r2, &[], |r| {
        let a = data.metric_jet(r)?.value;
        let lie = hessian_radial(data, data.potential(), r)?.scaled(2.0);
        let ric0 = ricci_radial(data, r)?.traceless(n);
        Ok(lie.dot(&ric0, n) * a.sqrt() * r.powf(k))
    })?;
    let flux = |r: f64| -> Result<f64> {
        let a = data.metric_jet(r)?.value;
        let dv = data.potential_jet(r)?.d1;
        let ric0 = ricci_radial(data, r)?.traceless(n);
        Ok(ric0.radial * dv / a.sqrt() * r.powf(k))
    };
    let lhs = omega * (nf - 2.0) / (2.0 * nf) * lhs.value;
    let rhs = omega * (-0.5 * bulk.value + flux(annulus.r2)? - flux(annulus.r1)?);
    Ok(PohozaevResult { lhs, rhs, residual: (lhs - rhs).abs() })
}

/// `kappa = (n-2) sqrt(m^2 - q^2) / r_h^(n-1)`, the limit of `|grad V|` at the horizon.
pub fn surface_gravity(p: &RNParameters) -> Result<f64> {
    let rh = rn_horizon(p).ok_or_else(|| Error::Domain(format!("no horizon for m = {}, |q| = {}", p.m, p.q.abs())))?;
    let n = p.n.as_f64();
    let gap = match p.regime() {
        Regime::Extremal => 0.0,
        _ => p.m * p.m - p.q * p.q,
    };
    Ok((n - 2.0) * gap.sqrt() / rh.powf(n - 1.0))
}
