use nkcurves::curves::{
    cr_residual, curve_volume, riemannian_area, sphere_in_plane, subtorus_family, CurveMesh,
};
use nkcurves::moduli::{
    continue_curve, curve_hausdorff, stokes_check, subtorus_path, volume_drift,
    ContinuationFailure, ContinuationOptions, Drive, FailureKind, FamilyPath,
};
use nkcurves::nk::{
    find_nk_metric, lambda_estimate, second_structure_equation_residual, structure_constant_table,
    structure_invariants, type_residual, BackgroundSpec, NKBackground,
};
use nkcurves::{Error, G2Path, MultiplicationTable};
use serde_json::{json, Value};

use crate::config::{DriveKind, ExperimentConfig};
use crate::report::{FamilyRow, Outcome, Status};
use crate::UsageError;

/// Failure of a command before any report exists.
pub enum Abort {
    Usage(String),
    Numerical(String),
}

impl From<UsageError> for Abort {
    fn from(e: UsageError) -> Self {
        Abort::Usage(e.0)
    }
}

impl From<Error> for Abort {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::Parse(_) | Error::NotApplicable(_) => {
                Abort::Usage(e.to_string())
            }
            _ => Abort::Numerical(e.to_string()),
        }
    }
}

type Run = Result<Outcome, Abort>;

fn unit_basis(triple: [usize; 3]) -> Result<[Vec<f64>; 3], Abort> {
    if triple.iter().any(|&i| !(1..=7).contains(&i)) {
        return Err(Abort::Usage(format!("triple {triple:?} must index e1..e7")));
    }
    Ok(triple.map(|i| {
        let mut v = vec![0.0; 7];
        v[i - 1] = 1.0;
        v
    }))
}

fn seed_curve(config: &ExperimentConfig, bg: &NKBackground) -> Result<CurveMesh, Abort> {
    match &config.background {
        BackgroundSpec::S6 => Ok(sphere_in_plane(
            unit_basis(config.curve.triple)?,
            config.resolution(),
        )?),
        BackgroundSpec::Torus { .. } => Ok(subtorus_family(
            bg,
            config.curve.t,
            config.curve.shift,
            config.resolution() as usize,
        )?),
        BackgroundSpec::S3s3 { .. } => Err(Abort::Usage(
            "no seed curves are implemented on s3s3".into(),
        )),
    }
}

fn opt<T: serde::Serialize>(r: nkcurves::Result<T>) -> Result<Option<T>, Abort> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotApplicable(_)) => Ok(None),
        Err(e) => Err(Abort::Numerical(e.to_string())),
    }
}

pub fn verify_structure(config: &ExperimentConfig) -> Run {
    let bg = config.background.build()?;
    let points = bg.sample_points(config.points, config.seed);
    let invariants = structure_invariants(&bg, &points, config.seed);
    let types = type_residual(&bg, &points).map_err(|e| Abort::Numerical(e.to_string()))?;
    let lambda = opt(lambda_estimate(&bg, &points))?;
    let second = match &lambda {
        Some(l) => opt(second_structure_equation_residual(
            &bg,
            &points,
            l.lambda_mean,
        ))?,
        None => None,
    };
    let structure_ok = invariants.max() < config.tol("structure");
    let hypothesis = types.max_fraction < config.tol("type");
    let lambda_ok = lambda.as_ref().is_none_or(|l| {
        l.lambda_std < config.tol("lambda") * l.lambda_mean.abs().max(f64::MIN_POSITIVE)
            && l.max_residual < config.tol("structure-equation")
    });
    let second_ok = second.is_none_or(|r| r < config.tol("structure-equation"));
    let status = if !structure_ok || !lambda_ok || !second_ok {
        Status::Fail
    } else if !hypothesis {
        Status::Violated
    } else {
        Status::Pass
    };
    let tables = match &config.background {
        BackgroundSpec::S6 => json!({ "multiplication": MultiplicationTable::standard() }),
        BackgroundSpec::S3s3 { .. } => json!({ "structure_constants": structure_constant_table() }),
        BackgroundSpec::Torus { .. } => json!({}),
    };
    let summary = format!(
        "{}: invariants {:.2e}, mixed-type fraction {:.2e}, lambda {}",
        bg.name(),
        invariants.max(),
        types.max_fraction,
        lambda
            .as_ref()
            .map_or("n/a".into(), |l| format!("{:.12}", l.lambda_mean)),
    );
    Ok(Outcome {
        status,
        summary,
        results: json!({
            "background": bg.descriptor(),
            "invariants": invariants,
            "hypothesis": if hypothesis { "holds" } else { "violated" },
            "type_max_fraction": types.max_fraction,
            "type_spectra": types.spectra,
            "lambda": lambda.as_ref().map(|l| json!({
                "mean": l.lambda_mean,
                "std": l.lambda_std,
                "max_residual": l.max_residual,
            })),
            "second_equation_residual": second,
            "tables": tables,
        }),
        rows: None,
    })
}

pub fn find_metric(config: &ExperimentConfig) -> Run {
    let s = find_nk_metric(config.search.lo, config.search.hi, config.tol("nk-metric"))?;
    let status = if s.converged && s.residual < config.tol("nk-metric") {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Outcome {
        status,
        summary: format!("b* = {:.15}, residual {:.2e}", s.b_star, s.residual),
        results: serde_json::to_value(&s).expect("serialisable"),
        rows: None,
    })
}

pub fn curve_volume_cmd(config: &ExperimentConfig) -> Run {
    let bg = config.background.build()?;
    let curve = seed_curve(config, &bg)?;
    curve.validate(&bg)?;
    let cr = cr_residual(&bg, &curve)?;
    let volume = curve_volume(&bg, &curve)?;
    let area = riemannian_area(&bg, &curve)?;
    let status = if cr.l2 < config.tol("cr") {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Outcome {
        status,
        summary: format!(
            "volume {volume:.12}, area {area:.12}, CR residual {:.2e}",
            cr.l2
        ),
        results: json!({
            "vertices": curve.vertices.len(),
            "faces": curve.faces.len(),
            "mesh_size": curve.mesh_size(),
            "volume": volume,
            "area": area,
            "wirtinger_gap": (area - volume) / area,
            "cr_residual": cr,
        }),
        rows: None,
    })
}

pub fn hausdorff_cmd(config: &ExperimentConfig) -> Run {
    if config.background != BackgroundSpec::S6 {
        return Err(Abort::Usage(
            "hausdorff compares great spheres on s6".into(),
        ));
    }
    let bg = config.background.build()?;
    let a = sphere_in_plane(unit_basis(config.hausdorff.first)?, config.resolution())?;
    let b = sphere_in_plane(unit_basis(config.hausdorff.second)?, config.resolution())?;
    let d = curve_hausdorff(&bg, &a, &b)?;
    Ok(Outcome {
        status: Status::Pass,
        summary: format!("d_H = {d:.15}"),
        results: json!({ "distance": d, "metric": "chordal", "samples": [a.vertices.len(), b.vertices.len()] }),
        rows: None,
    })
}

fn hypothesis_holds(spec: &BackgroundSpec) -> bool {
    match spec {
        BackgroundSpec::S6 => true,
        BackgroundSpec::S3s3 { .. } => false,
        BackgroundSpec::Torus { field } => field.is_zero(),
    }
}

enum Built {
    Path(FamilyPath),
    Failed(ContinuationFailure),
}

fn build_family(config: &ExperimentConfig, bg: &NKBackground) -> Result<Built, Abort> {
    let drive = config.family.drive.expect("resolved");
    let start = seed_curve(config, bg)?;
    let opts = ContinuationOptions {
        steps: config.steps(),
        residual_budget: config.tol("budget"),
        step_bound: config.tol("step"),
        ..ContinuationOptions::default()
    };
    let drive = match (&config.background, drive) {
        (BackgroundSpec::Torus { .. }, DriveKind::Translate) => {
            return Ok(Built::Path(subtorus_path(
                bg,
                config.curve.shift,
                config.resolution() as usize,
                config.steps(),
                opts.residual_budget,
                opts.step_bound,
            )?));
        }
        (BackgroundSpec::S6, DriveKind::G2) => Drive::G2Path {
            path: G2Path::random(config.seed),
        },
        (BackgroundSpec::S6, DriveKind::Random) => Drive::RandomNormal {
            magnitude: config.family.magnitude,
            seed: config.seed,
        },
        (spec, d) => {
            return Err(Abort::Usage(format!(
                "drive {d:?} does not apply to background {}",
                spec.name()
            )))
        }
    };
    match continue_curve(bg, &start, &drive, &opts) {
        Ok(path) => Ok(Built::Path(path)),
        Err(f) if f.kind == FailureKind::Precondition => Err(Abort::Usage(f.to_string())),
        Err(f) => Ok(Built::Failed(f)),
    }
}

fn rows(path: &FamilyPath, volumes: &[f64]) -> Vec<FamilyRow> {
    (0..path.len())
        .map(|k| FamilyRow {
            t: path.times[k],
            volume: volumes[k],
            residual: path.residuals[k],
            hausdorff_step: path.hausdorff_steps[k],
        })
        .collect()
}

fn path_summary(path: &FamilyPath) -> Value {
    json!({
        "provenance": path.provenance,
        "curves": path.len(),
        "vertices": path.curves[0].vertices.len(),
        "max_residual": path.residuals.iter().copied().fold(0.0, f64::max),
        "max_hausdorff_step": path.hausdorff_steps.iter().copied().fold(0.0, f64::max),
        "residual_budget": path.residual_budget,
        "step_bound": path.step_bound,
        "hausdorff_metric": "chordal",
    })
}

fn failed(bg: &NKBackground, f: ContinuationFailure) -> Run {
    let volumes = volume_drift(bg, &f.partial)?.volumes;
    Ok(Outcome {
        status: Status::Error,
        summary: f.to_string(),
        results: json!({
            "failure": { "kind": f.kind, "time": f.time, "message": f.message },
            "path": path_summary(&f.partial),
        }),
        rows: Some(rows(&f.partial, &volumes)),
    })
}

pub fn family(config: &ExperimentConfig) -> Run {
    let bg = config.background.build()?;
    let path = match build_family(config, &bg)? {
        Built::Path(p) => p,
        Built::Failed(f) => return failed(&bg, f),
    };
    let drift = volume_drift(&bg, &path)?;
    let stokes = stokes_check(&bg, &path, config.tol("stokes"))?;
    let hypothesis = hypothesis_holds(&config.background);
    let drift_ok = !hypothesis || drift.relative_drift < config.tol("drift");
    let status = if stokes.passed && drift_ok {
        Status::Pass
    } else {
        Status::Fail
    };
    let table = rows(&path, &drift.volumes);
    Ok(Outcome {
        status,
        summary: format!(
            "{} curves, relative drift {:.3e}, Stokes residual {:.3e} (tolerance {:.3e})",
            path.len(),
            drift.relative_drift,
            stokes.residual,
            stokes.tolerance
        ),
        results: json!({
            "path": path_summary(&path),
            "hypothesis": if hypothesis { "holds" } else { "violated" },
            "drift": {
                "max_drift": drift.max_drift,
                "relative_drift": drift.relative_drift,
                "checked": hypothesis,
            },
            "stokes": {
                "lhs": stokes.lhs,
                "rhs": stokes.rhs,
                "residual": stokes.residual,
                "tolerance": stokes.tolerance,
                "passed": stokes.passed,
            },
            "rows": table,
        }),
        rows: Some(table),
    })
}

pub fn stokes(config: &ExperimentConfig) -> Run {
    let bg = config.background.build()?;
    let path = match build_family(config, &bg)? {
        Built::Path(p) => p,
        Built::Failed(f) => return failed(&bg, f),
    };
    let report = stokes_check(&bg, &path, config.tol("stokes"))?;
    Ok(Outcome {
        status: if report.passed {
            Status::Pass
        } else {
            Status::Fail
        },
        summary: format!(
            "lhs {:.12e}, rhs {:.12e}, residual {:.3e} (tolerance {:.3e})",
            report.lhs, report.rhs, report.residual, report.tolerance
        ),
        results: json!({ "path": path_summary(&path), "stokes": report }),
        rows: None,
    })
}
