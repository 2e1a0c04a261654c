//! The three subcommands.

use serde::Serialize;

use electrovac::checks::{Grid, DEFAULT_GRID_COUNT};
use electrovac::photon_sphere::{Branch, RejectedRoot};
use electrovac::variational::DerivativeSample;
use electrovac::*;

use crate::report::{fmt_opt, Conventions, Envelope, Params, Source, Verdict};
use crate::table::ProfileTable;
use crate::{
    ClassifyArgs, CliError, FunctionalArgs, ModeArg, ModelArgs, Outcome, SpacingArg, ToleranceArgs, VerifyArgs,
};

/// Residual bound for the Pohozaev identity.
pub const POHOZAEV_TOL: f64 = 1e-7;

struct Model {
    n: Dimension,
    lambda: f64,
    data: SphericalStaticData,
    params: Option<RNParameters>,
    table: Option<ProfileTable>,
    source: Source,
}

fn load_model(args: &ModelArgs) -> Result<Model, CliError> {
    let n = Dimension::new(args.n)?;
    match (&args.profile, args.m) {
        (Some(path), _) => {
            if args.q != 0.0 {
                return Err(CliError::Usage(
                    "--q describes the closed-form family and cannot be combined with --profile".into(),
                ));
            }
            let table = ProfileTable::read(path)?;
            let data = table.to_data(n, args.lambda)?;
            let source =
                Source::Profile { path: path.display().to_string(), rows: table.r.len(), has_psi: table.psi.is_some() };
            Ok(Model { n, lambda: args.lambda, data, params: None, table: Some(table), source })
        }
        (None, Some(m)) => {
            if args.lambda != 0.0 {
                return Err(CliError::Usage(
                    "the Reissner-Nordstrom family has lambda = 0; --lambda applies to --profile".into(),
                ));
            }
            let p = RNParameters::new(args.n, m, args.q)?;
            Ok(Model {
                n,
                lambda: 0.0,
                data: rn_data(&p),
                params: Some(p),
                table: None,
                source: Source::ReissnerNordstrom { m, q: args.q },
            })
        }
        (None, None) => Err(CliError::Usage("either --m or --profile is required".into())),
    }
}

fn tolerances(args: &ToleranceArgs, env: Option<&str>, mode: DerivativeMode) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::for_mode(mode);
    if let Some(raw) = env {
        tol.identity = raw
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("{}={raw:?} is not a number: {e}", crate::TOL_ENV)))?;
    }
    if let Some(t) = args.tol_identity {
        tol.identity = t;
    }
    if let Some(t) = args.tol_quadrature {
        tol.quadrature = t;
    }
    tol.criticality = args.tol_criticality;
    tol.validate()?;
    Ok(tol)
}

fn params<X: Serialize>(model: &Model, extra: X) -> Params<X> {
    Params {
        n: model.n.get(),
        lambda: model.lambda,
        source: model.source.clone(),
        extra,
        conventions: Conventions::new(model.n),
    }
}

#[derive(Serialize)]
struct NoExtra {}

#[derive(Serialize)]
struct RootReport {
    r: f64,
    u: f64,
    multiplicity: u8,
    branch: Branch,
    extremality: ExtremalityClass,
    q1_residual: f64,
    q2_residual: Option<f64>,
    ric_nn_residual: f64,
}

#[derive(Serialize)]
struct ClassifyResults {
    regime: Regime,
    r_h: Option<f64>,
    r0: f64,
    surface_gravity: Option<f64>,
    case: PhotonSphereCase,
    count: usize,
    discriminant: f64,
    photon_spheres: Vec<f64>,
    roots: Vec<RootReport>,
    rejected_roots: Vec<RejectedRoot>,
}

pub fn classify(args: &ClassifyArgs, env: Option<&str>) -> Result<Outcome, CliError> {
    let model = load_model(&args.model)?;
    let Some(p) = model.params else {
        return Err(CliError::Usage("classify works on the closed-form family; pass --m and --q".into()));
    };
    let tol = tolerances(&args.tol, env, model.data.derivative_mode())?;
    let class = classify_configuration(&p);
    let ps = photon_sphere_radii(&p);
    let roots = ps
        .roots
        .iter()
        .map(|root| {
            let q = quasilocal_check(&model.data, root.r)?;
            Ok(RootReport {
                r: root.r,
                u: root.u,
                multiplicity: root.multiplicity,
                branch: root.branch,
                extremality: q.extremality,
                q1_residual: q.q1_residual,
                q2_residual: q.q2_residual,
                ric_nn_residual: q.ric_nn_residual,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let quasilocal_ok = roots.iter().all(|r| {
        r.q1_residual.abs() <= tol.identity
            && r.q2_residual.is_none_or(|x| x.abs() <= tol.identity)
            && r.ric_nn_residual.abs() <= tol.identity
    });
    let passed = quasilocal_ok && class.count == ps.count;
    let results = ClassifyResults {
        regime: p.regime(),
        r_h: rn_horizon(&p),
        r0: rn_r0(&p),
        surface_gravity: surface_gravity(&p).ok(),
        case: class.case,
        count: ps.count,
        discriminant: ps.discriminant,
        photon_spheres: ps.radii(),
        roots,
        rejected_roots: ps.rejected_roots.clone(),
    };

    let mut text = format!(
        "regime: {}\nr_h: {}\nr0: {:.12e}\ncase: {} ({} photon spheres)\n",
        results.regime.as_str(),
        fmt_opt(results.r_h),
        results.r0,
        results.case.as_str(),
        results.count
    );
    for r in &results.roots {
        text.push_str(&format!("  r_ps = {:.12e}  {:?}  multiplicity {}\n", r.r, r.extremality, r.multiplicity));
    }
    text.push_str(&format!("verdict: {}\n", if passed { "pass" } else { "fail" }));

    let env = Envelope {
        command: "classify",
        params: params(&model, NoExtra {}),
        results,
        tolerances: tol,
        verdict: Verdict::from_passed(passed),
    };
    Ok(Outcome { json: env.to_json(), text, passed })
}

#[derive(Serialize)]
struct GridRequest {
    count: Option<usize>,
    lo: Option<f64>,
    hi: Option<f64>,
    spacing: Option<SpacingArg>,
}

#[derive(Serialize)]
struct VerifyExtra {
    grid: GridRequest,
    boundary: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BoundarySource {
    Flag,
    PhotonSphere,
    None,
}

#[derive(Serialize)]
struct VerifyResults {
    grid: GridSummary,
    derivative_mode: DerivativeMode,
    boundary: Option<f64>,
    boundary_source: BoundarySource,
    failed: Vec<EquationId>,
    entries: Vec<ResidualEntry>,
}

fn verify_grid(args: &VerifyArgs, model: &Model) -> Result<Grid, CliError> {
    let custom = args.grid_lo.is_some() || args.grid_hi.is_some() || args.spacing.is_some();
    let count = args.grid_count.unwrap_or(DEFAULT_GRID_COUNT);
    let default = match (&model.params, &model.table) {
        (Some(p), _) => Grid::default_for_rn(p, count)?,
        (None, Some(t)) if !custom && args.grid_count.is_none() => Grid::explicit(t.interior_radii())?,
        (None, Some(t)) => {
            let radii = t.interior_radii();
            Grid::log(radii[0], radii[radii.len() - 1], count)?
        }
        (None, None) => unreachable!("a model has parameters or a table"),
    };
    if !custom {
        return Ok(default);
    }
    let pts = default.points();
    let lo = args.grid_lo.unwrap_or(pts[0]);
    let hi = args.grid_hi.unwrap_or(pts[pts.len() - 1]);
    Ok(match args.spacing.unwrap_or(SpacingArg::Log) {
        SpacingArg::Log => Grid::log(lo, hi, count)?,
        SpacingArg::Linear => Grid::linear(lo, hi, count)?,
    })
}

pub fn verify(args: &VerifyArgs, env: Option<&str>) -> Result<Outcome, CliError> {
    let model = load_model(&args.model)?;
    let tol = tolerances(&args.tol, env, model.data.derivative_mode())?;
    let grid = verify_grid(args, &model)?;
    let (boundary, boundary_source) = match (args.boundary, &model.params) {
        (Some(b), _) => (Some(b), BoundarySource::Flag),
        (None, Some(p)) => match photon_sphere_radii(p).outermost() {
            Some(r) => (Some(r), BoundarySource::PhotonSphere),
            None => (None, BoundarySource::None),
        },
        (None, None) => (None, BoundarySource::None),
    };
    let rep = residual_all(&model.data, boundary, &grid, tol.identity)?;
    let passed = rep.passed();

    let mut text = format!(
        "grid: {} points on [{}, {}]\nboundary: {}\n",
        rep.grid.count,
        fmt_opt(rep.grid.lo),
        fmt_opt(rep.grid.hi),
        fmt_opt(boundary)
    );
    for e in &rep.entries {
        let at = match e.worst_at {
            Some(Location::Radius(r)) => format!("{r:.6e}"),
            Some(Location::Point(p)) => format!("{p:?}"),
            None => "-".into(),
        };
        let status = match (e.status, e.passed) {
            (EntryStatus::Skipped, _) => "skip",
            (_, true) => "pass",
            (_, false) => "FAIL",
        };
        text.push_str(&format!("  {:<8} {status}  max {:.3e} at r = {at}\n", e.tag.as_str(), e.max_residual));
    }
    text.push_str(&format!("verdict: {}\n", if passed { "pass" } else { "fail" }));

    let extra = VerifyExtra {
        grid: GridRequest { count: args.grid_count, lo: args.grid_lo, hi: args.grid_hi, spacing: args.spacing },
        boundary: args.boundary,
    };
    let results = VerifyResults {
        grid: rep.grid,
        derivative_mode: model.data.derivative_mode(),
        boundary,
        boundary_source,
        failed: rep.failed_tags(),
        entries: rep.entries,
    };
    let env = Envelope {
        command: "verify",
        params: params(&model, extra),
        results,
        tolerances: tol,
        verdict: Verdict::from_passed(passed),
    };
    Ok(Outcome { json: env.to_json(), text, passed })
}

#[derive(Serialize)]
struct FunctionalExtra {
    annulus: [f64; 2],
    bump_center: Option<f64>,
    bump_width: Option<f64>,
    bump_scale: f64,
    mode: ModeArg,
    panels: usize,
}

#[derive(Serialize)]
struct PerturbationReport {
    center: f64,
    half_width: f64,
    support: [f64; 2],
    mode: PerturbationMode,
    scale: f64,
    norm: f64,
}

#[derive(Serialize)]
struct PohozaevReport {
    lhs: f64,
    rhs: f64,
    residual: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct FunctionalResults {
    annulus: [f64; 2],
    perturbation: PerturbationReport,
    value: f64,
    bulk: f64,
    boundary: f64,
    quadrature_error: f64,
    ladder: Vec<DerivativeSample>,
    richardson: f64,
    slope: Option<f64>,
    el_integral: f64,
    threshold: f64,
    critical: bool,
    gradient_mismatch: f64,
    gradient_tolerance: f64,
    gradient_check: bool,
    pohozaev: PohozaevReport,
}

pub fn functional(args: &FunctionalArgs, env: Option<&str>) -> Result<Outcome, CliError> {
    let model = load_model(&args.model)?;
    let tol = tolerances(&args.tol, env, model.data.derivative_mode())?;
    let (r1, r2) = (args.annulus[0], args.annulus[1]);
    let annulus = Annulus::new(r1, r2)?;
    let quad =
        Quadrature::new(QuadratureConfig { panels: args.panels, tolerance: tol.quadrature, ..Default::default() })?;
    let mode = match args.mode {
        ModeArg::Radial => PerturbationMode::Radial,
        ModeArg::Tangential => PerturbationMode::Tangential,
        ModeArg::Both => PerturbationMode::Both,
    };
    let center = args.bump_center.unwrap_or(0.5 * (r1 + r2));
    let width = args.bump_width.unwrap_or(0.25 * (r2 - r1));
    let pert = Perturbation::new(center, width, mode)?.with_scale(args.bump_scale);

    let base = evaluate_functional(&model.data, annulus, None, &quad)?;
    let est = criticality_test(&model.data, annulus, &pert, &quad, tol.criticality)?;
    let poh = pohozaev_residual(&model.data, annulus, &quad)?;
    let pohozaev = PohozaevReport {
        lhs: poh.lhs,
        rhs: poh.rhs,
        residual: poh.residual,
        tolerance: POHOZAEV_TOL,
        passed: poh.residual <= POHOZAEV_TOL,
    };
    let passed = est.critical;

    let mut text = format!(
        "F = {:.12e} on [{r1}, {r2}]\nbump: center {center}, half width {width}, {mode:?}, norm {:.6e}\n",
        base.value, est.perturbation_norm
    );
    for s in &est.ladder {
        text.push_str(&format!("  eps {:<8e} dF {:.6e}\n", s.epsilon, s.derivative));
    }
    text.push_str(&format!(
        "richardson {:.6e} (threshold {:.3e})\nslope {}\nEL integral {:.6e}, gradient check {}\nPohozaev residual {:.3e}\nverdict: {}\n",
        est.richardson,
        est.threshold,
        fmt_opt(est.slope),
        est.el_integral,
        if est.gradient_check { "pass" } else { "fail" },
        poh.residual,
        if passed { "pass" } else { "fail" }
    ));

    let extra = FunctionalExtra {
        annulus: [r1, r2],
        bump_center: args.bump_center,
        bump_width: args.bump_width,
        bump_scale: args.bump_scale,
        mode: args.mode,
        panels: args.panels,
    };
    let (lo, hi) = pert.support();
    let results = FunctionalResults {
        annulus: [r1, r2],
        perturbation: PerturbationReport {
            center,
            half_width: width,
            support: [lo, hi],
            mode,
            scale: args.bump_scale,
            norm: est.perturbation_norm,
        },
        value: base.value,
        bulk: base.bulk,
        boundary: base.boundary,
        quadrature_error: base.quadrature_error,
        ladder: est.ladder,
        richardson: est.richardson,
        slope: est.slope,
        el_integral: est.el_integral,
        threshold: est.threshold,
        critical: est.critical,
        gradient_mismatch: est.gradient_mismatch,
        gradient_tolerance: est.gradient_tolerance,
        gradient_check: est.gradient_check,
        pohozaev,
    };
    let env = Envelope {
        command: "functional",
        params: params(&model, extra),
        results,
        tolerances: tol,
        verdict: Verdict::from_passed(passed),
    };
    Ok(Outcome { json: env.to_json(), text, passed })
}
