//! Curvature and extrinsic geometry of spherically symmetric metrics
//! `g = A(r) dr^2 + r^2 g_{S^{n-1}}`.
//!
//! Every symmetric 2-tensor in scope is diagonal in the orthonormal frame
//! `{e_r = A^{-1/2} d_r, e_i}` with a single tangential eigenvalue, so it is
//! stored as a [`FrameTensor2`]. The unit normal of the slices `r = const`
//! is `nu = e_r`, pointing toward increasing `r`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{DerivativeMode, Interval, Jet, RadialProfile};

/// Spatial dimension `n >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!("dimension must be at least 3, got {n}")));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

impl TryFrom<usize> for Dimension {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

/// Symmetric 2-tensor reduced by spherical symmetry: one radial and one
/// tangential eigenvalue in the orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FrameTensor2 {
    pub radial: f64,
    pub tangential: f64,
}

impl FrameTensor2 {
    pub const ZERO: FrameTensor2 = FrameTensor2 { radial: 0.0, tangential: 0.0 };

    pub const fn new(radial: f64, tangential: f64) -> Self {
        Self { radial, tangential }
    }

    /// The metric itself.
    pub const fn identity() -> Self {
        Self::new(1.0, 1.0)
    }

    pub fn trace(&self, n: Dimension) -> f64 {
        self.radial + (n.as_f64() - 1.0) * self.tangential
    }

    /// Full contraction `<S, T>_g`.
    pub fn dot(&self, other: &FrameTensor2, n: Dimension) -> f64 {
        self.radial * other.radial + (n.as_f64() - 1.0) * self.tangential * other.tangential
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(c * self.radial, c * self.tangential)
    }

    pub fn max_abs(&self) -> f64 {
        self.radial.abs().max(self.tangential.abs())
    }

    /// Traceless part `T - (tr T / n) g`.
    pub fn traceless(&self, n: Dimension) -> Self {
        let mean = self.trace(n) / n.as_f64();
        Self::new(self.radial - mean, self.tangential - mean)
    }
}

impl std::ops::Add for FrameTensor2 {
    type Output = FrameTensor2;
    fn add(self, o: FrameTensor2) -> FrameTensor2 {
        FrameTensor2::new(self.radial + o.radial, self.tangential + o.tangential)
    }
}

impl std::ops::Sub for FrameTensor2 {
    type Output = FrameTensor2;
    fn sub(self, o: FrameTensor2) -> FrameTensor2 {
        FrameTensor2::new(self.radial - o.radial, self.tangential - o.tangential)
    }
}

/// Local data of a warped metric `a(r) dr^2 + w(r)^2 g_S`: the radial
/// coefficient with its first derivative and the warping function with two
/// derivatives. Enough to evaluate Ricci curvature and slice geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpedJet {
    pub a: f64,
    pub da: f64,
    pub w: f64,
    pub dw: f64,
    pub ddw: f64,
}

impl WarpedJet {
    /// The area-radius chart, `w = r`.
    pub fn area_radius(r: f64, a: f64, da: f64) -> Self {
        Self { a, da, w: r, dw: 1.0, ddw: 0.0 }
    }

    /// `dw/drho` and `d^2w/drho^2` in arclength `drho = sqrt(a) dr`.
    fn arclength_derivatives(&self) -> (f64, f64) {
        let s = self.a.sqrt();
        let w_rho = self.dw / s;
        let w_rhorho = self.ddw / self.a - self.dw * self.da / (2.0 * self.a * self.a);
        (w_rho, w_rhorho)
    }

    pub fn ricci(&self, n: Dimension) -> FrameTensor2 {
        let k = n.as_f64() - 1.0;
        let (w_rho, w_rhorho) = self.arclength_derivatives();
        let radial = -k * w_rhorho / self.w;
        let tangential = -w_rhorho / self.w + (k - 1.0) * (1.0 - w_rho * w_rho) / (self.w * self.w);
        FrameTensor2::new(radial, tangential)
    }

    pub fn scalar_curvature(&self, n: Dimension) -> f64 {
        self.ricci(n).trace(n)
    }

    /// Mean curvature of the slice with respect to the normal toward increasing `r`.
    pub fn mean_curvature(&self, n: Dimension) -> f64 {
        (n.as_f64() - 1.0) * self.arclength_derivatives().0 / self.w
    }
}

/// Static electro-vacuum data on a radial domain, reduced by spherical symmetry.
///
/// The electric field is radial, `E = sign * |E| e_r`.
#[derive(Debug, Clone)]
pub struct SphericalStaticData {
    n: Dimension,
    lambda: f64,
    a: RadialProfile,
    v: RadialProfile,
    emag: RadialProfile,
    field_sign: f64,
    psi: Option<RadialProfile>,
    domain: Interval,
}

/// Distance kept from the lower end of the domain, where `V` may vanish.
pub const HORIZON_GUARD: f64 = 1e-9;

impl SphericalStaticData {
    pub fn new(n: Dimension, lambda: f64, a: RadialProfile, v: RadialProfile, emag: RadialProfile) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Parameter("cosmological constant must be finite".into()));
        }
        let domain = a.domain().intersect(&v.domain()).intersect(&emag.domain());
        if !(domain.lo < domain.hi) {
            return Err(Error::Domain("profiles have disjoint domains".into()));
        }
        Ok(Self { n, lambda, a, v, emag, field_sign: 1.0, psi: None, domain })
    }

    /// Attach the electric potential `Psi` with `V E = -grad Psi`.
    pub fn with_psi(mut self, psi: RadialProfile) -> Self {
        self.domain = self.domain.intersect(&psi.domain());
        self.psi = Some(psi);
        self
    }

    /// Orientation of `E` relative to `e_r`; only `|E|` enters the equations.
    pub fn with_field_sign(mut self, sign: f64) -> Self {
        self.field_sign = if sign < 0.0 { -1.0 } else { 1.0 };
        self
    }

    /// Replace the static potential, keeping metric and field.
    pub fn with_potential(&self, v: RadialProfile) -> Self {
        let mut out = self.clone();
        out.domain = out.domain.intersect(&v.domain());
        out.v = v;
        out
    }

    /// The same data with every profile differentiated numerically.
    pub fn to_finite_difference(&self) -> Self {
        let mut out = self.clone();
        out.a = self.a.to_finite_difference();
        out.v = self.v.to_finite_difference();
        out.emag = self.emag.to_finite_difference();
        out.psi = self.psi.as_ref().map(RadialProfile::to_finite_difference);
        out
    }

    pub fn dimension(&self) -> Dimension {
        self.n
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn metric_coefficient(&self) -> &RadialProfile {
        &self.a
    }
    pub fn potential(&self) -> &RadialProfile {
        &self.v
    }
    pub fn field_magnitude(&self) -> &RadialProfile {
        &self.emag
    }
    pub fn field_sign(&self) -> f64 {
        self.field_sign
    }
    pub fn electric_potential(&self) -> Option<&RadialProfile> {
        self.psi.as_ref()
    }
    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Closed-form only if every profile is.
    pub fn derivative_mode(&self) -> DerivativeMode {
        let all = [Some(&self.a), Some(&self.v), Some(&self.emag), self.psi.as_ref()];
        if all.iter().flatten().all(|p| p.mode() == DerivativeMode::ClosedForm) {
            DerivativeMode::ClosedForm
        } else {
            DerivativeMode::FiniteDifference
        }
    }

    pub fn check_interior(&self, r: f64) -> Result<()> {
        let Interval { lo, hi } = self.domain;
        if !r.is_finite() || r - lo <= HORIZON_GUARD * lo.max(1.0) || r >= hi {
            return Err(Error::Domain(format!("r = {r} is not interior to ({lo}, {hi})")));
        }
        Ok(())
    }

    pub(crate) fn metric_jet(&self, r: f64) -> Result<Jet> {
        self.check_interior(r)?;
        let a = self.a.jet(r)?;
        if !(a.value > 0.0) {
            return Err(Error::Numerics(format!("metric coefficient A({r}) = {} is not positive", a.value)));
        }
        Ok(a)
    }

    pub(crate) fn warped(&self, r: f64) -> Result<WarpedJet> {
        let a = self.metric_jet(r)?;
        Ok(WarpedJet::area_radius(r, a.value, a.d1))
    }

    pub fn potential_jet(&self, r: f64) -> Result<Jet> {
        self.check_interior(r)?;
        self.v.jet(r)
    }

    pub fn field_jet(&self, r: f64) -> Result<Jet> {
        self.check_interior(r)?;
        self.emag.jet(r)
    }

    /// `|E|_g^2` at `r`.
    pub fn field_norm_sq(&self, r: f64) -> Result<f64> {
        let e = self.field_jet(r)?.value;
        Ok(e * e)
    }
}

/// Ricci tensor in the orthonormal frame.
pub fn ricci_radial(data: &SphericalStaticData, r: f64) -> Result<FrameTensor2> {
    Ok(data.warped(r)?.ricci(data.dimension()))
}

pub fn scalar_curvature(data: &SphericalStaticData, r: f64) -> Result<f64> {
    Ok(ricci_radial(data, r)?.trace(data.dimension()))
}

/// `dR_g/dr`, needs the second derivative of `A`.
pub fn scalar_curvature_derivative(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let a = data.metric_jet(r)?;
    let k = data.dimension().as_f64() - 1.0;
    let (av, a1, a2) = (a.value, a.d1, a.d2);
    // R = k A'/(A^2 r) + k (k-1) (1 - 1/A)/r^2
    let first = k * (a2 / (av * av * r) - 2.0 * a1 * a1 / (av * av * av * r) - a1 / (av * av * r * r));
    let second = k * (k - 1.0) * (a1 / (av * av * r * r) - 2.0 * (1.0 - 1.0 / av) / (r * r * r));
    Ok(first + second)
}

/// Hessian of a radial function in the orthonormal frame.
pub fn hessian_radial(data: &SphericalStaticData, f: &RadialProfile, r: f64) -> Result<FrameTensor2> {
    let a = data.metric_jet(r)?;
    let f = f.jet(r)?;
    let radial = f.d2 / a.value - f.d1 * a.d1 / (2.0 * a.value * a.value);
    let tangential = f.d1 / (a.value * r);
    Ok(FrameTensor2::new(radial, tangential))
}

/// `Delta_g f`, evaluated in divergence form `|g|^{-1/2} d_r(|g|^{1/2} g^{rr} f')`.
pub fn laplacian_radial(data: &SphericalStaticData, f: &RadialProfile, r: f64) -> Result<f64> {
    let a = data.metric_jet(r)?;
    let f = f.jet(r)?;
    let k = data.dimension().as_f64() - 1.0;
    // flux = r^k f' A^{-1/2}; volume density = r^k A^{1/2}
    let sqrt_a = a.value.sqrt();
    let dflux = r.powf(k) * (k * f.d1 / r + f.d2 - 0.5 * f.d1 * a.d1 / a.value) / sqrt_a;
    Ok(dflux / (r.powf(k) * sqrt_a))
}

/// `|grad f|_g`.
pub fn grad_norm(data: &SphericalStaticData, f: &RadialProfile, r: f64) -> Result<f64> {
    let a = data.metric_jet(r)?;
    Ok(f.jet(r)?.d1.abs() / a.value.sqrt())
}

/// Geometry of the round slice `r = const`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypersurfaceGeometry {
    pub r: f64,
    /// Mean curvature (trace of the second fundamental form).
    pub mean_curvature: f64,
    /// Eigenvalue of the second fundamental form on tangent directions.
    pub b_tangential: f64,
    /// Intrinsic scalar curvature of the slice.
    pub slice_scalar_curvature: f64,
    /// `dV/dnu`.
    pub normal_derivative_v: f64,
    /// `Ric_g(nu, nu)`.
    pub ric_nn: f64,
}

pub fn level_set_geometry(data: &SphericalStaticData, r: f64) -> Result<HypersurfaceGeometry> {
    let n = data.dimension();
    let k = n.as_f64() - 1.0;
    let warped = data.warped(r)?;
    let v = data.potential_jet(r)?;
    let h = warped.mean_curvature(n);
    Ok(HypersurfaceGeometry {
        r,
        mean_curvature: h,
        b_tangential: h / k,
        slice_scalar_curvature: k * (k - 1.0) / (r * r),
        normal_derivative_v: v.d1 / warped.a.sqrt(),
        ric_nn: warped.ricci(n).radial,
    })
}

/// `|R_g - 2 Ric(nu,nu) - (R_S - (n-2)/(n-1) H^2)|` on the slice `r`.
pub fn contracted_gauss_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let n = data.dimension();
    let k = n.as_f64() - 1.0;
    let geo = level_set_geometry(data, r)?;
    let lhs = scalar_curvature(data, r)? - 2.0 * geo.ric_nn;
    let rhs = geo.slice_scalar_curvature - (k - 1.0) / k * geo.mean_curvature.powi(2);
    Ok((lhs - rhs).abs())
}

/// Limit of a quantity at the lower end of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub value: f64,
    /// Difference between the two highest Richardson levels.
    pub error: f64,
}

/// Richardson extrapolation of `g(r0 + delta)` to `delta -> 0` from
/// `delta = 10^-k`, `k = 3..=8`.
pub fn richardson_limit(r0: f64, mut g: impl FnMut(f64) -> Result<f64>) -> Result<LimitEstimate> {
    const RATIO: f64 = 10.0;
    let samples: Vec<f64> = (3..=8).map(|k| g(r0 + 10f64.powi(-k))).collect::<Result<_>>()?;
    // Neville tableau at delta = 0 for geometrically shrinking steps
    let mut table = samples.clone();
    let mut top = (table[table.len() - 1], table[table.len() - 1]);
    for level in 1..samples.len() {
        let factor = RATIO.powi(level as i32);
        let next: Vec<f64> = table.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
        top = (table[table.len() - 1], next[next.len() - 1]);
        table = next;
        if table.len() == 1 {
            break;
        }
    }
    Ok(LimitEstimate { value: top.1, error: (top.1 - top.0).abs() })
}

/// Surface gravity as the limit of `|grad V|_g` at a zero `r_zero` of `V`
/// sitting at the lower end of the domain.
pub fn surface_gravity_limit(data: &SphericalStaticData, r_zero: f64) -> Result<LimitEstimate> {
    richardson_limit(r_zero, |r| grad_norm(data, data.potential(), r))
}
