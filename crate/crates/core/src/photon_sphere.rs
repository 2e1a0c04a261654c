//! Photon spheres of Reissner–Nordström data: the Robin residual
//! `(n-1) dV/dnu - V H`, its closed-form zeros in `u = r^(n-2)`, and the
//! quasi-local photon-sphere conditions on a round slice.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{level_set_geometry, SphericalStaticData};
use crate::models::{rn_r0, RNParameters, Regime};
use crate::roots::{scan_roots, RootTolerance};

/// Relative size of the discriminant below which the two roots merge.
pub const DOUBLE_ROOT_TOL: f64 = 1e-12;
/// Admissible roots satisfy `V(r) > ADMISSIBLE_V`.
pub const ADMISSIBLE_V: f64 = 1e-9;

/// `(n-1) dV/dnu - V H` on the slice `r`; zero exactly on photon spheres.
pub fn boundary_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let geo = level_set_geometry(data, r)?;
    let v = data.potential_jet(r)?.value;
    let k = data.dimension().as_f64() - 1.0;
    Ok(k * geo.normal_derivative_v - v * geo.mean_curvature)
}

/// Zeros of [`boundary_residual`] located by sign changes on `grid` and
/// refined by Brent's method. Grid points outside the domain are dropped.
pub fn scan_photon_spheres(data: &SphericalStaticData, grid: &[f64]) -> Result<Vec<f64>> {
    let interior: Vec<f64> = grid.iter().copied().filter(|&r| data.check_interior(r).is_ok()).collect();
    scan_roots(|r| boundary_residual(data, r).unwrap_or(f64::NAN), &interior, RootTolerance::relative(1e-15))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonSphereRoot {
    pub r: f64,
    pub u: f64,
    pub multiplicity: u8,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedRoot {
    pub branch: Branch,
    pub u: Option<f64>,
    pub r: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonSphereResult {
    /// `n^2 m^2 - 4(n-1) q^2`.
    pub discriminant: f64,
    /// Admissible radii in increasing order.
    pub roots: Vec<PhotonSphereRoot>,
    pub count: usize,
    pub rejected_roots: Vec<RejectedRoot>,
}

impl PhotonSphereResult {
    pub fn radii(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.r).collect()
    }

    pub fn outermost(&self) -> Option<f64> {
        self.roots.last().map(|r| r.r)
    }
}

/// `(u_plus, u_minus)` of `u^2 - n m u + (n-1) q^2 = 0`, or `None` when the
/// roots are complex. The small root is formed as `c / u_plus` to avoid
/// cancellation.
fn quadratic_roots(p: &RNParameters) -> (f64, Option<(f64, f64)>) {
    let n = p.n.as_f64();
    let b = n * p.m;
    let c = (n - 1.0) * p.q * p.q;
    let disc = b * b - 4.0 * c;
    if disc.abs() <= DOUBLE_ROOT_TOL * b * b {
        return (disc, Some((0.5 * b, 0.5 * b)));
    }
    if disc < 0.0 {
        return (disc, None);
    }
    let plus = 0.5 * (b + disc.sqrt());
    (disc, Some((plus, c / plus)))
}

/// Closed-form photon-sphere radii with admissibility filtering: a root
/// counts iff `r - r0 > 1e-9 max(1, r0)` and `V(r) > 1e-9`.
pub fn photon_sphere_radii(p: &RNParameters) -> PhotonSphereResult {
    let np = p.n.as_f64() - 2.0;
    let r0 = rn_r0(p);
    let (discriminant, roots) = quadratic_roots(p);
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();

    let candidates: Vec<(Branch, f64, u8)> = match roots {
        None => {
            rejected.push(RejectedRoot {
                branch: Branch::Double,
                u: None,
                r: None,
                reason: format!("negative discriminant {discriminant:e}: complex roots"),
            });
            vec![]
        }
        Some((plus, minus)) if plus == minus => vec![(Branch::Double, plus, 2)],
        Some((plus, minus)) => vec![(Branch::Minus, minus, 1), (Branch::Plus, plus, 1)],
    };

    for (branch, u, multiplicity) in candidates {
        if !(u > 0.0) {
            rejected.push(RejectedRoot { branch, u: Some(u), r: None, reason: format!("u = {u} is not positive") });
            continue;
        }
        let r = u.powf(1.0 / np);
        let margin = 1e-9 * r0.max(1.0);
        let v2 = p.potential_squared(r).value;
        let reason = if r - r0 <= margin {
            Some(format!("r = {r} does not lie above r0 = {r0}"))
        } else if !(v2 > ADMISSIBLE_V * ADMISSIBLE_V) {
            Some(format!("V(r) = {} is not positive", v2.max(0.0).sqrt()))
        } else {
            None
        };
        match reason {
            Some(reason) => rejected.push(RejectedRoot { branch, u: Some(u), r: Some(r), reason }),
            None => accepted.push(PhotonSphereRoot { r, u, multiplicity, branch }),
        }
    }
    PhotonSphereResult { discriminant, count: accepted.len(), roots: accepted, rejected_roots: rejected }
}

/// Root-count cases of the Reissner–Nordström photon-sphere equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhotonSphereCase {
    Unique,
    Two,
    UniqueDouble,
    None,
}

impl PhotonSphereCase {
    pub fn as_str(self) -> &'static str {
        match self {
            PhotonSphereCase::Unique => "unique",
            PhotonSphereCase::Two => "two",
            PhotonSphereCase::UniqueDouble => "unique-double",
            PhotonSphereCase::None => "none",
        }
    }

    pub fn expected_count(self) -> usize {
        match self {
            PhotonSphereCase::Two => 2,
            PhotonSphereCase::Unique | PhotonSphereCase::UniqueDouble => 1,
            PhotonSphereCase::None => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub regime: Regime,
    pub case: PhotonSphereCase,
    pub count: usize,
}

/// Case from the parameter inequalities: unique for `m >= |q|`, two for
/// `|q| > m > (2 sqrt(n-1)/n)|q|`, a double root at equality, none below.
pub fn classify_configuration(p: &RNParameters) -> Classification {
    let regime = p.regime();
    let n = p.n.as_f64();
    let threshold = 2.0 * (n - 1.0).sqrt() / n * p.q.abs();
    let case = match regime {
        Regime::SubExtremal | Regime::Extremal => PhotonSphereCase::Unique,
        Regime::SuperExtremal => {
            let gap = p.m * p.m - threshold * threshold;
            if gap.abs() <= DOUBLE_ROOT_TOL * p.m * p.m {
                PhotonSphereCase::UniqueDouble
            } else if gap > 0.0 {
                PhotonSphereCase::Two
            } else {
                PhotonSphereCase::None
            }
        }
    };
    Classification { regime, case, count: case.expected_count() }
}

/// Slice classification by `H^2` against `(n-2)/(n-1) R_S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremalityClass {
    SubExtremal,
    Extremal,
    SuperExtremal,
}

impl ExtremalityClass {
    pub fn of(mean_curvature: f64, slice_scalar: f64, n: f64) -> Self {
        let h2 = mean_curvature * mean_curvature;
        let bound = (n - 2.0) / (n - 1.0) * slice_scalar;
        if (h2 - bound).abs() <= 1e-12 * h2.abs().max(bound.abs()) {
            ExtremalityClass::Extremal
        } else if h2 > bound {
            ExtremalityClass::SubExtremal
        } else {
            ExtremalityClass::SuperExtremal
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasilocalReport {
    pub r: f64,
    /// `R_S - n/(n-1) H^2 - 2|E|^2`.
    pub q1_residual: f64,
    /// `dV/dnu - H V/(n-1)`, absent where `V` vanishes.
    pub q2_residual: Option<f64>,
    /// `Ric(nu, nu) + H^2/(n-1)`.
    pub ric_nn_residual: f64,
    pub extremality: ExtremalityClass,
    pub note: Option<String>,
}

impl QuasilocalReport {
    pub fn max_residual(&self) -> f64 {
        self.q1_residual.abs().max(self.q2_residual.map_or(0.0, f64::abs)).max(self.ric_nn_residual.abs())
    }
}

/// Quasi-local photon-sphere conditions on the slice `r`.
pub fn quasilocal_check(data: &SphericalStaticData, r: f64) -> Result<QuasilocalReport> {
    let n = data.dimension().as_f64();
    let geo = level_set_geometry(data, r)?;
    let h = geo.mean_curvature;
    let e2 = data.field_norm_sq(r)?;
    let v = data.potential_jet(r)?.value;
    let q1 = geo.slice_scalar_curvature - n / (n - 1.0) * h * h - 2.0 * e2;
    let (q2, note) = if v.abs() < ADMISSIBLE_V {
        (None, Some(Error::Degeneracy(format!("V({r}) = {v} vanishes")).to_string()))
    } else {
        (Some(geo.normal_derivative_v - h * v / (n - 1.0)), None)
    };
    Ok(QuasilocalReport {
        r,
        q1_residual: q1,
        q2_residual: q2,
        ric_nn_residual: geo.ric_nn + h * h / (n - 1.0),
        extremality: ExtremalityClass::of(h, geo.slice_scalar_curvature, n),
        note,
    })
}
