//! Residuals of the electrostatic system in all of its forms, evaluated on
//! radial grids and collected into [`ResidualReport`]s.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    hessian_radial, laplacian_radial, level_set_geometry, ricci_radial, scalar_curvature, FrameTensor2,
    SphericalStaticData,
};
use crate::models::{rn_horizon, RNParameters};
use crate::profile::DerivativeMode;
use crate::roots::{lin_space, log_space};

/// Equations of the electrostatic system and its derived forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EquationId {
    E1,
    E2,
    /// `div E = 0`.
    E3a,
    /// `d(V E^flat) = 0`.
    E3b,
    E4,
    TE1,
    TE2,
    NE1,
    NE2,
    /// Master equation `Hess V - (Delta V) g - V Ric = 2V(E^flat (x) E^flat - |E|^2 g)`.
    AE1,
    PEM1,
    PEM2,
    PEM3,
    PEM4,
    NPEM1,
    /// `Delta V = (-R/(n-1) + 2|E|^2) V`.
    #[serde(rename = "TRACE_AE")]
    TraceAe,
}

impl EquationId {
    pub const ALL: [EquationId; 16] = [
        EquationId::E1,
        EquationId::E2,
        EquationId::E3a,
        EquationId::E3b,
        EquationId::E4,
        EquationId::TE1,
        EquationId::TE2,
        EquationId::NE1,
        EquationId::NE2,
        EquationId::AE1,
        EquationId::PEM1,
        EquationId::PEM2,
        EquationId::PEM3,
        EquationId::PEM4,
        EquationId::NPEM1,
        EquationId::TraceAe,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EquationId::E1 => "E1",
            EquationId::E2 => "E2",
            EquationId::E3a => "E3a",
            EquationId::E3b => "E3b",
            EquationId::E4 => "E4",
            EquationId::TE1 => "TE1",
            EquationId::TE2 => "TE2",
            EquationId::NE1 => "NE1",
            EquationId::NE2 => "NE2",
            EquationId::AE1 => "AE1",
            EquationId::PEM1 => "PEM1",
            EquationId::PEM2 => "PEM2",
            EquationId::PEM3 => "PEM3",
            EquationId::PEM4 => "PEM4",
            EquationId::NPEM1 => "NPEM1",
            EquationId::TraceAe => "TRACE_AE",
        }
    }

    /// Equations posed on the boundary slice rather than in the interior.
    pub fn is_boundary(self) -> bool {
        matches!(self, EquationId::E4 | EquationId::TE2 | EquationId::NE2 | EquationId::PEM4)
    }
}

impl std::fmt::Display for EquationId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a worst residual was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Location {
    Radius(f64),
    Point([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    /// Evaluated numerically at every grid point.
    Evaluated,
    /// Holds by construction for spherically symmetric data.
    Structural,
    /// Not applicable to this input (e.g. no boundary slice).
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub tag: EquationId,
    pub max_residual: f64,
    pub worst_at: Option<Location>,
    pub passed: bool,
    pub status: EntryStatus,
    /// Grid points left out because `V` degenerates there.
    pub skipped_points: usize,
    pub note: Option<String>,
}

impl ResidualEntry {
    fn skipped(tag: EquationId, note: &str) -> Self {
        Self {
            tag,
            max_residual: 0.0,
            worst_at: None,
            passed: true,
            status: EntryStatus::Skipped,
            skipped_points: 0,
            note: Some(note.to_owned()),
        }
    }

    fn single(tag: EquationId, value: f64, r: f64, tol: f64) -> Self {
        Self {
            tag,
            max_residual: value.abs(),
            worst_at: Some(Location::Radius(r)),
            passed: value.abs() <= tol,
            status: EntryStatus::Evaluated,
            skipped_points: 0,
            note: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
    Explicit,
    /// Cartesian samples of the unit ball and its boundary sphere.
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSummary {
    pub spacing: Spacing,
    pub count: usize,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub boundary_count: Option<usize>,
}

impl GridSummary {
    pub fn points(interior: usize, boundary: usize) -> Self {
        Self { spacing: Spacing::Ball, count: interior, lo: None, hi: None, boundary_count: Some(boundary) }
    }
}

/// Radii at which interior equations are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    spacing: Spacing,
}

/// Grid size used by default.
pub const DEFAULT_GRID_COUNT: usize = 1000;

impl Grid {
    fn validate(lo: f64, hi: f64, count: usize) -> Result<()> {
        if count < 2 {
            return Err(Error::Parameter(format!("grid needs at least 2 points, got {count}")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Parameter(format!("grid bounds must satisfy lo < hi, got [{lo}, {hi}]")));
        }
        Ok(())
    }

    pub fn log(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::validate(lo, hi, count)?;
        if !(lo > 0.0) {
            return Err(Error::Parameter(format!("log grid needs lo > 0, got {lo}")));
        }
        Ok(Self { points: log_space(lo, hi, count), spacing: Spacing::Log })
    }

    pub fn linear(lo: f64, hi: f64, count: usize) -> Result<Self> {
        Self::validate(lo, hi, count)?;
        Ok(Self { points: lin_space(lo, hi, count), spacing: Spacing::Linear })
    }

    pub fn explicit(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.iter().any(|r| !r.is_finite()) {
            return Err(Error::Parameter("explicit grid needs finite radii".into()));
        }
        Ok(Self { points, spacing: Spacing::Explicit })
    }

    /// Log grid from just outside the lower end of the exterior region to
    /// `100 max(1, r0)`. For super-extremal data the lower end is
    /// `1.01 |q|^(1/(n-2))`.
    pub fn default_for_rn(p: &RNParameters, count: usize) -> Result<Self> {
        let start = match rn_horizon(p) {
            Some(rh) => rh,
            None => p.q.abs().powf(1.0 / (p.n.as_f64() - 2.0)),
        };
        Self::log(1.01 * start, 100.0 * start.max(1.0), count)
    }

    /// Log grid over `(1.01 lo, 100 max(1, lo))` clipped to the data domain.
    pub fn default_for(data: &SphericalStaticData, count: usize) -> Result<Self> {
        let d = data.domain();
        let lo = if d.lo > 0.0 { 1.01 * d.lo } else { 0.01 };
        let hi = (100.0 * d.lo.max(1.0)).min(d.hi - 1e-9 * d.hi.abs().max(1.0));
        Self::log(lo, hi, count)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn summary(&self) -> GridSummary {
        let lo = self.points.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        GridSummary {
            spacing: self.spacing,
            count: self.points.len(),
            lo: Some(lo),
            hi: Some(hi),
            boundary_count: None,
        }
    }
}

/// Default tolerances; finite-difference data gets looser identity and
/// quadrature tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub identity: f64,
    pub quadrature: f64,
    pub criticality: f64,
}

impl Tolerances {
    pub const CLOSED_FORM_IDENTITY: f64 = 1e-9;
    pub const FINITE_DIFFERENCE_IDENTITY: f64 = 1e-5;
    pub const CLOSED_FORM_QUADRATURE: f64 = 1e-8;
    pub const FINITE_DIFFERENCE_QUADRATURE: f64 = 1e-5;

    pub fn for_mode(mode: DerivativeMode) -> Self {
        let (identity, quadrature) = match mode {
            DerivativeMode::ClosedForm => (Self::CLOSED_FORM_IDENTITY, Self::CLOSED_FORM_QUADRATURE),
            DerivativeMode::FiniteDifference => (Self::FINITE_DIFFERENCE_IDENTITY, Self::FINITE_DIFFERENCE_QUADRATURE),
        };
        Self { identity, quadrature, criticality: 1e-5 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in
            [("identity", self.identity), ("quadrature", self.quadrature), ("criticality", self.criticality)]
        {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Parameter(format!("{name} tolerance must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

/// Per-equation residual maxima over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub grid: GridSummary,
    pub tolerance: f64,
    pub entries: Vec<ResidualEntry>,
}

impl ResidualReport {
    pub fn entry(&self, tag: EquationId) -> Option<&ResidualEntry> {
        self.entries.iter().find(|e| e.tag == tag)
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failed_tags(&self) -> Vec<EquationId> {
        self.entries.iter().filter(|e| !e.passed).map(|e| e.tag).collect()
    }

    /// Concatenate entries; the grid and tolerance of `self` are kept.
    pub fn merge(mut self, other: ResidualReport) -> Self {
        self.entries.extend(other.entries);
        self
    }
}

/// Degenerate-`V` threshold for the potential forms.
pub const V_DEGENERACY: f64 = 1e-9;

fn n_minus_one(data: &SphericalStaticData) -> f64 {
    data.dimension().as_f64() - 1.0
}

/// `E^flat (x) E^flat` in the frame: only the radial slot.
fn field_square(e2: f64) -> FrameTensor2 {
    FrameTensor2::new(e2, 0.0)
}

/// `Hess V - V(Ric - 2 Lambda/(n-1) g + 2 E (x) E - 2|E|^2/(n-1) g)`.
pub fn e1_residual(data: &SphericalStaticData, r: f64) -> Result<FrameTensor2> {
    let k = n_minus_one(data);
    let hess = hessian_radial(data, data.potential(), r)?;
    let ric = ricci_radial(data, r)?;
    let v = data.potential_jet(r)?.value;
    let e2 = data.field_norm_sq(r)?;
    let shift = 2.0 * data.lambda() / k + 2.0 * e2 / k;
    let rhs = ric + field_square(e2).scaled(2.0) - FrameTensor2::identity().scaled(shift);
    Ok(hess - rhs.scaled(v))
}

/// `Delta V - V(2(n-2)/(n-1) |E|^2 - 2 Lambda/(n-1))`.
pub fn e2_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let k = n_minus_one(data);
    let lap = laplacian_radial(data, data.potential(), r)?;
    let v = data.potential_jet(r)?.value;
    let e2 = data.field_norm_sq(r)?;
    Ok(lap - v * (2.0 * (k - 1.0) / k * e2 - 2.0 * data.lambda() / k))
}

/// `div E = A^(-1/2) r^(1-n) d_r(r^(n-1) E)` for the frame component `E`.
pub fn e3a_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let k = n_minus_one(data);
    let a = data.metric_jet(r)?;
    let e = data.field_jet(r)?;
    Ok(data.field_sign() * (k * e.value / r + e.d1) / a.value.sqrt())
}

/// `Delta V - V(R - 2n Lambda/(n-1) - 2|E|^2/(n-1))`.
pub fn te1_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let k = n_minus_one(data);
    let lap = laplacian_radial(data, data.potential(), r)?;
    let v = data.potential_jet(r)?.value;
    let e2 = data.field_norm_sq(r)?;
    let big_r = scalar_curvature(data, r)?;
    Ok(lap - v * (big_r - 2.0 * (k + 1.0) * data.lambda() / k - 2.0 * e2 / k))
}

/// `Delta V - (-R/(n-1) + 2|E|^2) V`.
pub fn trace_ae_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let k = n_minus_one(data);
    let lap = laplacian_radial(data, data.potential(), r)?;
    let v = data.potential_jet(r)?.value;
    let e2 = data.field_norm_sq(r)?;
    Ok(lap - (-scalar_curvature(data, r)? / k + 2.0 * e2) * v)
}

/// `R - 2|E|^2 - 2 Lambda`.
pub fn ne1_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    Ok(scalar_curvature(data, r)? - 2.0 * data.field_norm_sq(r)? - 2.0 * data.lambda())
}

/// `Hess V - (Delta V) g - V Ric - 2V(E (x) E - |E|^2 g)`. This is also the
/// Euler–Lagrange tensor of the functional.
pub fn master_residual(data: &SphericalStaticData, r: f64) -> Result<FrameTensor2> {
    let hess = hessian_radial(data, data.potential(), r)?;
    let lap = laplacian_radial(data, data.potential(), r)?;
    let ric = ricci_radial(data, r)?;
    let v = data.potential_jet(r)?.value;
    let e2 = data.field_norm_sq(r)?;
    let source = (field_square(e2) - FrameTensor2::identity().scaled(e2)).scaled(2.0 * v);
    Ok(hess - FrameTensor2::identity().scaled(lap) - ric.scaled(v) - source)
}

/// `dV/dnu - H V/(n-1)` on the slice `r`.
pub fn te2_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let geo = level_set_geometry(data, r)?;
    let v = data.potential_jet(r)?.value;
    Ok(geo.normal_derivative_v - geo.mean_curvature * v / n_minus_one(data))
}

/// Tangential eigenvalue of `(dV/dnu) g - V B` on the slice `r`.
pub fn e4_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let geo = level_set_geometry(data, r)?;
    let v = data.potential_jet(r)?.value;
    Ok(geo.normal_derivative_v - v * geo.b_tangential)
}

/// `B_tan - H/(n-1)`; zero by construction for round slices.
pub fn ne2_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let geo = level_set_geometry(data, r)?;
    Ok(geo.b_tangential - geo.mean_curvature / n_minus_one(data))
}

/// `Psi'` and `Psi''` at `r`, or an error when no potential is attached.
fn psi_jet(data: &SphericalStaticData, r: f64) -> Result<crate::profile::Jet> {
    let psi = data.electric_potential().ok_or_else(|| Error::Parameter("data carries no electric potential".into()))?;
    data.check_interior(r)?;
    psi.jet(r)
}

fn nondegenerate_v(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let v = data.potential_jet(r)?.value;
    if v.abs() < V_DEGENERACY {
        return Err(Error::Degeneracy(format!("V({r}) = {v} vanishes")));
    }
    Ok(v)
}

/// `|d Psi|_g^2`.
pub fn dpsi_norm_sq(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let a = data.metric_jet(r)?;
    let p = psi_jet(data, r)?;
    Ok(p.d1 * p.d1 / a.value)
}

/// `Hess V - V Ric - (2/V) dPsi (x) dPsi + 2/((n-1)V) |dPsi|^2 g`.
pub fn pem1_residual(data: &SphericalStaticData, r: f64) -> Result<FrameTensor2> {
    let v = nondegenerate_v(data, r)?;
    let k = n_minus_one(data);
    let d2 = dpsi_norm_sq(data, r)?;
    let hess = hessian_radial(data, data.potential(), r)?;
    let ric = ricci_radial(data, r)?;
    let rhs = ric.scaled(v) + field_square(d2).scaled(2.0 / v) - FrameTensor2::identity().scaled(2.0 * d2 / (k * v));
    Ok(hess - rhs)
}

/// `Delta V - 2(n-2)/(n-1) |dPsi|^2 / V`.
pub fn pem2_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let v = nondegenerate_v(data, r)?;
    let k = n_minus_one(data);
    let lap = laplacian_radial(data, data.potential(), r)?;
    Ok(lap - 2.0 * (k - 1.0) / k * dpsi_norm_sq(data, r)? / v)
}

/// `div(grad Psi / V)` in divergence form.
pub fn pem3_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let v = nondegenerate_v(data, r)?;
    let k = n_minus_one(data);
    let a = data.metric_jet(r)?;
    let dv = data.potential_jet(r)?.d1;
    let p = psi_jet(data, r)?;
    let bracket = k * p.d1 / r + p.d2 - p.d1 * a.d1 / (2.0 * a.value) - p.d1 * dv / v;
    Ok(bracket / (a.value * v))
}

/// `R - 2 |dPsi|^2 / V^2`.
pub fn npem1_residual(data: &SphericalStaticData, r: f64) -> Result<f64> {
    let v = nondegenerate_v(data, r)?;
    Ok(scalar_curvature(data, r)? - 2.0 * dpsi_norm_sq(data, r)? / (v * v))
}

/// A pointwise residual: `Ok(None)` marks a point skipped for degenerate `V`.
type PointFn<'a> = dyn Fn(f64) -> Result<Option<f64>> + Sync + 'a;

fn skip_degenerate(res: Result<f64>) -> Result<Option<f64>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(Error::Degeneracy(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluate several pointwise residuals over the grid in parallel, then
/// reduce in grid order so that ties resolve to the first radius.
fn scan_grid(grid: &Grid, tol: f64, columns: &[(EquationId, &PointFn<'_>)]) -> Result<Vec<ResidualEntry>> {
    let rows: Vec<Vec<Option<f64>>> = grid
        .points()
        .par_iter()
        .map(|&r| columns.iter().map(|(_, f)| f(r)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let entries = columns
        .iter()
        .enumerate()
        .map(|(j, (tag, _))| {
            let mut worst: Option<(f64, f64)> = None;
            let mut skipped = 0;
            for (row, &r) in rows.iter().zip(grid.points()) {
                match row[j] {
                    None => skipped += 1,
                    Some(x) => {
                        let x = if x.is_nan() { f64::INFINITY } else { x.abs() };
                        if worst.is_none_or(|(m, _)| x > m) {
                            worst = Some((x, r));
                        }
                    }
                }
            }
            let (max, at) = worst.map_or((0.0, None), |(m, r)| (m, Some(Location::Radius(r))));
            ResidualEntry {
                tag: *tag,
                max_residual: max,
                worst_at: at,
                passed: max <= tol,
                status: if worst.is_none() { EntryStatus::Skipped } else { EntryStatus::Evaluated },
                skipped_points: skipped,
                note: (skipped > 0).then(|| format!("{skipped} points with |V| < {V_DEGENERACY:e} skipped")),
            }
        })
        .collect();
    Ok(entries)
}

fn check_grid(data: &SphericalStaticData, grid: &Grid) -> Result<()> {
    for &r in grid.points() {
        data.check_interior(r)?;
    }
    Ok(())
}

fn report(grid: &Grid, tol: f64, entries: Vec<ResidualEntry>) -> ResidualReport {
    ResidualReport { grid: grid.summary(), tolerance: tol, entries }
}

/// (E1) in both frame components, (E2), (E3a); (E3b) holds structurally.
pub fn residual_system(data: &SphericalStaticData, grid: &Grid, tol: f64) -> Result<ResidualReport> {
    check_grid(data, grid)?;
    let e1 = |r: f64| e1_residual(data, r).map(|t| Some(t.max_abs()));
    let e2 = |r: f64| e2_residual(data, r).map(Some);
    let e3a = |r: f64| e3a_residual(data, r).map(Some);
    let mut entries = scan_grid(grid, tol, &[(EquationId::E1, &e1), (EquationId::E2, &e2), (EquationId::E3a, &e3a)])?;
    entries.push(ResidualEntry {
        tag: EquationId::E3b,
        max_residual: 0.0,
        worst_at: None,
        passed: true,
        status: EntryStatus::Structural,
        skipped_points: 0,
        note: Some("V E^flat = f(r) dr is closed for radial fields".into()),
    });
    Ok(report(grid, tol, entries))
}

/// Both frame components of the master equation (AE1).
pub fn residual_master(data: &SphericalStaticData, grid: &Grid, tol: f64) -> Result<ResidualReport> {
    check_grid(data, grid)?;
    let ae1 = |r: f64| master_residual(data, r).map(|t| Some(t.max_abs()));
    Ok(report(grid, tol, scan_grid(grid, tol, &[(EquationId::AE1, &ae1)])?))
}

fn boundary_entries(
    data: &SphericalStaticData,
    r_boundary: Option<f64>,
    tol: f64,
    tags: &[EquationId],
) -> Result<Vec<ResidualEntry>> {
    let Some(rb) = r_boundary else {
        return Ok(tags.iter().map(|&t| ResidualEntry::skipped(t, "no boundary slice")).collect());
    };
    tags.iter()
        .map(|&tag| {
            let val = match tag {
                EquationId::TE2 => te2_residual(data, rb)?,
                EquationId::E4 | EquationId::PEM4 => e4_residual(data, rb)?,
                EquationId::NE2 => {
                    let mut e = ResidualEntry::single(tag, ne2_residual(data, rb)?, rb, tol);
                    e.status = EntryStatus::Structural;
                    return Ok(e);
                }
                _ => unreachable!("not a boundary equation"),
            };
            Ok(ResidualEntry::single(tag, val, rb, tol))
        })
        .collect()
}

/// (TE1) and the traced master equation on the grid; (TE2), (E4), (NE2) at
/// the boundary slice when one is given.
pub fn residual_traced(
    data: &SphericalStaticData,
    r_boundary: Option<f64>,
    grid: &Grid,
    tol: f64,
) -> Result<ResidualReport> {
    check_grid(data, grid)?;
    let te1 = |r: f64| te1_residual(data, r).map(Some);
    let tr = |r: f64| trace_ae_residual(data, r).map(Some);
    let mut entries = scan_grid(grid, tol, &[(EquationId::TE1, &te1), (EquationId::TraceAe, &tr)])?;
    entries.extend(boundary_entries(data, r_boundary, tol, &[EquationId::TE2, EquationId::E4, EquationId::NE2])?);
    Ok(report(grid, tol, entries))
}

/// The potential forms (PEM1)-(PEM3), (NPEM1), and (PEM4) at the boundary.
/// Points with `|V| < 1e-9` are skipped and counted.
pub fn residual_pem(
    data: &SphericalStaticData,
    r_boundary: Option<f64>,
    grid: &Grid,
    tol: f64,
) -> Result<ResidualReport> {
    if data.electric_potential().is_none() {
        return Err(Error::Parameter("potential forms need an electric potential".into()));
    }
    check_grid(data, grid)?;
    let p1 = |r: f64| skip_degenerate(pem1_residual(data, r).map(|t| t.max_abs()));
    let p2 = |r: f64| skip_degenerate(pem2_residual(data, r));
    let p3 = |r: f64| skip_degenerate(pem3_residual(data, r));
    let np1 = |r: f64| skip_degenerate(npem1_residual(data, r));
    let mut entries = scan_grid(
        grid,
        tol,
        &[(EquationId::PEM1, &p1), (EquationId::PEM2, &p2), (EquationId::PEM3, &p3), (EquationId::NPEM1, &np1)],
    )?;
    entries.extend(boundary_entries(data, r_boundary, tol, &[EquationId::PEM4])?);
    Ok(report(grid, tol, entries))
}

/// The scalar identity (NE1).
pub fn residual_scalar(data: &SphericalStaticData, grid: &Grid, tol: f64) -> Result<ResidualReport> {
    check_grid(data, grid)?;
    let ne1 = |r: f64| ne1_residual(data, r).map(Some);
    Ok(report(grid, tol, scan_grid(grid, tol, &[(EquationId::NE1, &ne1)])?))
}

/// Every residual that applies to the data, one entry per tag.
pub fn residual_all(
    data: &SphericalStaticData,
    r_boundary: Option<f64>,
    grid: &Grid,
    tol: f64,
) -> Result<ResidualReport> {
    let mut rep = residual_system(data, grid, tol)?;
    let mut all = std::mem::take(&mut rep.entries);
    all.extend(boundary_entries(data, r_boundary, tol, &[EquationId::E4])?);
    all.extend(residual_traced(data, r_boundary, grid, tol)?.entries.into_iter().filter(|e| e.tag != EquationId::E4));
    all.extend(residual_scalar(data, grid, tol)?.entries);
    all.extend(residual_master(data, grid, tol)?.entries);
    if data.electric_potential().is_some() {
        all.extend(residual_pem(data, r_boundary, grid, tol)?.entries);
    } else {
        for tag in [EquationId::PEM1, EquationId::PEM2, EquationId::PEM3, EquationId::PEM4, EquationId::NPEM1] {
            all.push(ResidualEntry::skipped(tag, "no electric potential"));
        }
    }
    all.sort_by_key(|e| e.tag);
    rep.entries = all;
    Ok(rep)
}

/// Whether the first-order system and the master equation agree in verdict.
pub fn equivalence_property(data: &SphericalStaticData, grid: &Grid, tol: f64) -> bool {
    match (residual_system(data, grid, tol), residual_master(data, grid, tol)) {
        (Ok(a), Ok(b)) => a.passed() == b.passed(),
        _ => false,
    }
}
