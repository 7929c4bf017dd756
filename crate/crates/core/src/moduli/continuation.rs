#![allow(clippy::result_large_err)] // failures carry the partial path by value

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::integrals::{cr_residual, dbar_vectors, face_jet, jet_from_points};
use crate::curves::mesh::CurveMesh;
use crate::error::Result;
use crate::linalg::{dot, norm};
use crate::moduli::family::{FamilyPath, Provenance};
use crate::moduli::hausdorff::curve_hausdorff;
use crate::nk::background::NKBackground;
use crate::octonion::G2Path;

/// What moves the curve between consecutive times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Drive {
    /// `curve(t) = M(t)·start` for a path `M` in `G₂`.
    G2Path { path: G2Path },
    /// Per step, a random linear ambient field `x ↦ Ax` projected to the
    /// normal bundle of the curve and scaled to `magnitude`.
    RandomNormal { magnitude: f64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContinuationOptions {
    pub steps: usize,
    /// Bound on the CR residual `l2` of every accepted curve.
    pub residual_budget: f64,
    /// Bound on `d_H` between consecutive curves.
    pub step_bound: f64,
    pub max_iterations: usize,
    pub initial_damping: f64,
    /// Forward-difference step for the residual Jacobian.
    pub jacobian_step: f64,
    /// How many times a step may be halved to respect `step_bound`.
    pub max_bisections: usize,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        Self {
            steps: 20,
            residual_budget: 1e-7,
            step_bound: 0.1,
            max_iterations: 200,
            initial_damping: 1e-3,
            jacobian_step: 1e-7,
            max_bisections: 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Precondition,
    /// Gauss–Newton did not reach the residual budget.
    Stall,
    /// The Hausdorff step bound could not be met by bisection.
    StepBound,
}

/// A continuation that stopped early, with every curve accepted so far.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuationFailure {
    pub kind: FailureKind,
    pub time: f64,
    pub message: String,
    pub partial: FamilyPath,
}

impl fmt::Display for ContinuationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "continuation failed at t = {} ({:?}): {}; {} curves accepted",
            self.time,
            self.kind,
            self.message,
            self.partial.len()
        )
    }
}

impl std::error::Error for ContinuationFailure {}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussNewtonReport {
    pub iterations: usize,
    pub initial_l2: f64,
    pub final_l2: f64,
    pub converged: bool,
}

/// Orthonormal basis of `T_pM` from projected coordinate axes.
fn tangent_basis(bg: &NKBackground, p: &[f64]) -> Vec<Vec<f64>> {
    let n = p.len();
    let d = bg.geometry.dim();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for i in 0..n {
        if basis.len() == d {
            break;
        }
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let mut v = bg.geometry.project_tangent(p, &e);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let l = norm(&v);
        if l > 1e-3 {
            basis.push(v.into_iter().map(|x| x / l).collect());
        }
    }
    basis
}

/// `√w · (L c₁, L c₂)` with `L` a square root of the metric, so that
/// `|r|² = w|∂̄f|²`.
fn face_residual(
    bg: &NKBackground,
    curve: &CurveMesh,
    face: usize,
    points: [&[f64]; 3],
) -> Result<Vec<f64>> {
    let jet = jet_from_points(bg, curve, face, points)?;
    let q = &jet.circumcenter;
    let (c1, c2) = dbar_vectors(bg, &jet, q);
    let s = curve.weights[face].sqrt();
    let mut r = bg.geometry.metric_sqrt(q, &c1);
    r.extend(bg.geometry.metric_sqrt(q, &c2));
    Ok(r.into_iter().map(|x| s * x).collect())
}

fn energy(bg: &NKBackground, curve: &CurveMesh) -> Result<f64> {
    let parts = (0..curve.faces.len())
        .into_par_iter()
        .map(|f| {
            let jet = face_jet(bg, curve, f)?;
            let q = &jet.circumcenter;
            let (c1, c2) = dbar_vectors(bg, &jet, q);
            Ok(curve.weights[f] * (bg.metric(q, &c1, &c1) + bg.metric(q, &c2, &c2)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let e: f64 = parts.iter().sum();
    Ok(if e.is_finite() { e } else { f64::INFINITY })
}

struct Linearisation {
    /// Per face: residual and row-major Jacobian (rows × 3d).
    faces: Vec<(Vec<f64>, Vec<f64>)>,
    rows: usize,
    d: usize,
}

fn linearise(
    bg: &NKBackground,
    curve: &CurveMesh,
    bases: &[Vec<Vec<f64>>],
    eps: f64,
) -> Result<Linearisation> {
    let d = bg.geometry.dim();
    let faces = (0..curve.faces.len())
        .into_par_iter()
        .map(|f| {
            let idx = curve.faces[f];
            let pts: Vec<&[f64]> = idx
                .iter()
                .map(|&i| curve.vertices[i].point.as_slice())
                .collect();
            let r0 = face_residual(bg, curve, f, [pts[0], pts[1], pts[2]])?;
            let rows = r0.len();
            let mut jac = vec![0.0; rows * 3 * d];
            for corner in 0..3 {
                for k in 0..d {
                    let t = &bases[idx[corner]][k];
                    let moved: Vec<f64> = pts[corner]
                        .iter()
                        .zip(t)
                        .map(|(p, v)| p + eps * v)
                        .collect();
                    let moved = bg.geometry.retract(&moved);
                    let mut p3 = [pts[0], pts[1], pts[2]];
                    p3[corner] = &moved;
                    let r1 = face_residual(bg, curve, f, p3)?;
                    let col = corner * d + k;
                    for row in 0..rows {
                        jac[row * 3 * d + col] = (r1[row] - r0[row]) / eps;
                    }
                }
            }
            Ok((r0, jac))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = faces.first().map_or(0, |(r, _)| r.len());
    Ok(Linearisation { faces, rows, d })
}

impl Linearisation {
    /// `y = JᵀJ x`.
    fn normal_apply(&self, curve: &CurveMesh, x: &[f64]) -> Vec<f64> {
        let (d, rows) = (self.d, self.rows);
        let mut y = vec![0.0; x.len()];
        let mut jx = vec![0.0; rows];
        for (f, (_, jac)) in self.faces.iter().enumerate() {
            let idx = curve.faces[f];
            for (row, out) in jx.iter_mut().enumerate() {
                let mut s = 0.0;
                for corner in 0..3 {
                    for k in 0..d {
                        s += jac[row * 3 * d + corner * d + k] * x[idx[corner] * d + k];
                    }
                }
                *out = s;
            }
            for corner in 0..3 {
                for k in 0..d {
                    let mut s = 0.0;
                    for (row, v) in jx.iter().enumerate() {
                        s += jac[row * 3 * d + corner * d + k] * v;
                    }
                    y[idx[corner] * d + k] += s;
                }
            }
        }
        y
    }

    /// `(Jᵀr, diag JᵀJ)`.
    fn gradient_and_diagonal(&self, curve: &CurveMesh, unknowns: usize) -> (Vec<f64>, Vec<f64>) {
        let (d, rows) = (self.d, self.rows);
        let mut g = vec![0.0; unknowns];
        let mut diag = vec![0.0; unknowns];
        for (f, (r, jac)) in self.faces.iter().enumerate() {
            let idx = curve.faces[f];
            for corner in 0..3 {
                for k in 0..d {
                    let col = corner * d + k;
                    let (mut gs, mut ds) = (0.0, 0.0);
                    for row in 0..rows {
                        let j = jac[row * 3 * d + col];
                        gs += j * r[row];
                        ds += j * j;
                    }
                    g[idx[corner] * d + k] += gs;
                    diag[idx[corner] * d + k] += ds;
                }
            }
        }
        (g, diag)
    }
}

/// Jacobi-preconditioned conjugate gradients for `(JᵀJ + μ) x = b`.
fn solve_damped(
    lin: &Linearisation,
    curve: &CurveMesh,
    b: &[f64],
    diag: &[f64],
    mu: f64,
) -> Vec<f64> {
    let n = b.len();
    let apply = |x: &[f64]| -> Vec<f64> {
        let mut y = lin.normal_apply(curve, x);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += mu * xi;
        }
        y
    };
    let precond: Vec<f64> = diag.iter().map(|d| 1.0 / (d + mu)).collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&precond).map(|(a, p)| a * p).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return x;
    }
    for _ in 0..2000 {
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm(&r) < 1e-12 * b_norm {
            break;
        }
        z = r.iter().zip(&precond).map(|(a, p)| a * p).collect();
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    x
}

fn displaced(
    bg: &NKBackground,
    curve: &CurveMesh,
    bases: &[Vec<Vec<f64>>],
    delta: &[f64],
) -> CurveMesh {
    let d = bg.geometry.dim();
    let points = curve
        .vertices
        .iter()
        .enumerate()
        .map(|(v, vert)| {
            let mut x = vert.point.clone();
            for k in 0..d {
                let c = delta[v * d + k];
                for (xi, ti) in x.iter_mut().zip(&bases[v][k]) {
                    *xi += c * ti;
                }
            }
            bg.geometry.retract(&x)
        })
        .collect();
    curve.with_points(points)
}

/// Damped Gauss–Newton on `E(f) = Σ w|∂̄_J f|²` over tangent vertex
/// displacements, each update retracted to the background.
///
/// Levenberg damping starts at `initial_damping`, halves on an accepted
/// step and doubles on a rejected one; stops once `l2 < residual_budget`.
pub fn gauss_newton_project(
    bg: &NKBackground,
    curve: &CurveMesh,
    opts: &ContinuationOptions,
) -> Result<(CurveMesh, GaussNewtonReport)> {
    let total_weight: f64 = curve.weights.iter().sum();
    let target = opts.residual_budget.powi(2) * total_weight;
    let mut current = curve.clone();
    let mut e = energy(bg, &current)?;
    let initial_l2 = (e / total_weight).sqrt();
    let mut mu = opts.initial_damping;
    let mut iterations = 0;
    'outer: while e >= target && iterations < opts.max_iterations {
        let bases: Vec<Vec<Vec<f64>>> = current
            .vertices
            .iter()
            .map(|v| tangent_basis(bg, &v.point))
            .collect();
        let lin = linearise(bg, &current, &bases, opts.jacobian_step)?;
        let unknowns = current.vertices.len() * lin.d;
        let (g, diag) = lin.gradient_and_diagonal(&current, unknowns);
        let rhs: Vec<f64> = g.iter().map(|x| -x).collect();
        loop {
            iterations += 1;
            let delta = solve_damped(&lin, &current, &rhs, &diag, mu);
            let candidate = displaced(bg, &current, &bases, &delta);
            let e_new = energy(bg, &candidate).unwrap_or(f64::INFINITY);
            if e_new < e {
                current = candidate;
                e = e_new;
                mu = (mu * 0.5).max(1e-15);
                break;
            }
            mu *= 2.0;
            if mu > 1e12 || iterations >= opts.max_iterations {
                break 'outer;
            }
        }
    }
    let final_l2 = (e / total_weight).sqrt();
    Ok((
        current,
        GaussNewtonReport {
            iterations,
            initial_l2,
            final_l2,
            converged: e < target,
        },
    ))
}

/// Unit-free normal directions of the curve at each vertex: `T_pM` minus
/// the averaged tangent plane of the adjacent faces.
fn normal_projector(bg: &NKBackground, curve: &CurveMesh) -> Result<Vec<DMatrix<f64>>> {
    let n = bg.geometry.ambient_dim();
    let mut acc = vec![DMatrix::<f64>::zeros(n, n); curve.vertices.len()];
    for f in 0..curve.faces.len() {
        let jet = face_jet(bg, curve, f)?;
        let la = norm(&jet.a);
        let ea: Vec<f64> = jet.a.iter().map(|x| x / la).collect();
        let c = dot(&jet.b, &ea);
        let bperp: Vec<f64> = jet.b.iter().zip(&ea).map(|(b, a)| b - c * a).collect();
        let lb = norm(&bperp);
        let eb: Vec<f64> = bperp.iter().map(|x| x / lb).collect();
        for &v in &curve.faces[f] {
            for i in 0..n {
                for j in 0..n {
                    acc[v][(i, j)] += ea[i] * ea[j] + eb[i] * eb[j];
                }
            }
        }
    }
    curve
        .vertices
        .iter()
        .zip(acc)
        .map(|(vert, m)| {
            let p = &vert.point;
            let proj = DMatrix::from_fn(n, n, |i, j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                bg.geometry.project_tangent(p, &e)[i]
            });
            let sym = &proj * &m * &proj;
            let sym = (&sym + sym.transpose()) * 0.5;
            if !sym.iter().all(|x| x.is_finite()) {
                return Err(crate::error::Error::MeshQuality("degenerate face".into()));
            }
            let eig = SymmetricEigen::new(sym);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            let mut out = proj.clone();
            for &k in order.iter().take(2) {
                let u = eig.eigenvectors.column(k);
                out -= u * u.transpose();
            }
            Ok(out)
        })
        .collect()
}

fn step_seed(seed: u64, t: f64) -> u64 {
    seed ^ t.to_bits().wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Applies the drive from `t0` to `t1`, before any projection.
fn drive_step(
    bg: &NKBackground,
    start: &CurveMesh,
    prev: &CurveMesh,
    drive: &Drive,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<CurveMesh> {
    match drive {
        Drive::G2Path { path } => Ok(start.apply_g2(&path.at(t1)?)),
        Drive::RandomNormal { magnitude, seed } => {
            let n = bg.geometry.ambient_dim();
            let mut rng = ChaCha8Rng::seed_from_u64(step_seed(*seed, t1));
            let a: Vec<f64> = (0..n * n)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            let projectors = normal_projector(bg, prev)?;
            let field: Vec<Vec<f64>> = prev
                .vertices
                .iter()
                .zip(&projectors)
                .map(|(v, proj)| {
                    let raw: Vec<f64> = (0..n)
                        .map(|i| (0..n).map(|j| a[i * n + j] * v.point[j]).sum())
                        .collect();
                    (0..n)
                        .map(|i| (0..n).map(|j| proj[(i, j)] * raw[j]).sum())
                        .collect()
                })
                .collect();
            let largest = field.iter().map(|v| norm(v)).fold(0.0, f64::max);
            if !(largest > 0.0) || !largest.is_finite() {
                return Err(crate::error::Error::MeshQuality(
                    "drive field vanishes on the curve".into(),
                ));
            }
            let scale = magnitude * (t1 - t0) * steps as f64 / largest;
            Ok(prev.with_points(
                prev.vertices
                    .iter()
                    .zip(&field)
                    .map(|(v, w)| {
                        let x: Vec<f64> =
                            v.point.iter().zip(w).map(|(p, d)| p + scale * d).collect();
                        bg.geometry.retract(&x)
                    })
                    .collect(),
            ))
        }
    }
}

struct Tracker<'a> {
    bg: &'a NKBackground,
    start: &'a CurveMesh,
    drive: &'a Drive,
    opts: &'a ContinuationOptions,
    path: FamilyPath,
}

impl Tracker<'_> {
    fn fail(&self, kind: FailureKind, time: f64, message: String) -> ContinuationFailure {
        ContinuationFailure {
            kind,
            time,
            message,
            partial: self.path.clone(),
        }
    }

    fn advance(&mut self, t0: f64, t1: f64, depth: usize) -> Result<(), ContinuationFailure> {
        let prev = self
            .path
            .curves
            .last()
            .expect("path starts nonempty")
            .clone();
        let raw = drive_step(
            self.bg,
            self.start,
            &prev,
            self.drive,
            t0,
            t1,
            self.opts.steps,
        )
        .map_err(|e| self.fail(FailureKind::Stall, t1, e.to_string()))?;
        let residual = cr_residual(self.bg, &raw)
            .map(|r| r.l2)
            .unwrap_or(f64::INFINITY);
        let candidate = if residual < self.opts.residual_budget {
            raw
        } else {
            let (projected, report) = gauss_newton_project(self.bg, &raw, self.opts)
                .map_err(|e| self.fail(FailureKind::Stall, t1, e.to_string()))?;
            if !report.converged {
                return Err(self.fail(
                    FailureKind::Stall,
                    t1,
                    format!(
                        "Gauss–Newton reached l2 = {:e} after {} iterations (budget {:e})",
                        report.final_l2, report.iterations, self.opts.residual_budget
                    ),
                ));
            }
            projected
        };
        let residual = cr_residual(self.bg, &candidate)
            .map_err(|e| self.fail(FailureKind::Stall, t1, e.to_string()))?
            .l2;
        let step = curve_hausdorff(self.bg, &prev, &candidate)
            .map_err(|e| self.fail(FailureKind::Stall, t1, e.to_string()))?;
        if step <= self.opts.step_bound {
            self.path.times.push(t1);
            self.path.curves.push(candidate);
            self.path.residuals.push(residual);
            self.path.hausdorff_steps.push(step);
            return Ok(());
        }
        if depth >= self.opts.max_bisections {
            return Err(self.fail(
                FailureKind::StepBound,
                t1,
                format!("Hausdorff step {step:e} exceeds {:e}", self.opts.step_bound),
            ));
        }
        let mid = 0.5 * (t0 + t1);
        self.advance(t0, mid, depth + 1)?;
        self.advance(mid, t1, depth + 1)
    }
}

/// Follows a family of pseudoholomorphic curves from `start` over `[0, 1]`.
///
/// Each step applies the drive, re-projects with [`gauss_newton_project`]
/// when the residual exceeds the budget, and bisects the step while the
/// Hausdorff distance to the previous curve exceeds the step bound.
pub fn continue_curve(
    bg: &NKBackground,
    start: &CurveMesh,
    drive: &Drive,
    opts: &ContinuationOptions,
) -> Result<FamilyPath, ContinuationFailure> {
    let mut tracker = Tracker {
        bg,
        start,
        drive,
        opts,
        path: FamilyPath {
            background: bg.spec.clone(),
            provenance: match drive {
                Drive::G2Path { .. } => Provenance::ExactFamily,
                Drive::RandomNormal { .. } => Provenance::Continued,
            },
            times: vec![0.0],
            curves: vec![start.clone()],
            residuals: vec![],
            hausdorff_steps: vec![0.0],
            residual_budget: opts.residual_budget,
            step_bound: opts.step_bound,
        },
    };
    let precondition = |tracker: &Tracker, msg: String| ContinuationFailure {
        kind: FailureKind::Precondition,
        time: 0.0,
        message: msg,
        partial: tracker.path.clone(),
    };
    if opts.steps == 0 {
        return Err(precondition(&tracker, "at least one step required".into()));
    }
    if let Err(e) = start.validate(bg) {
        return Err(precondition(&tracker, e.to_string()));
    }
    let r0 = match cr_residual(bg, start) {
        Ok(r) => r.l2,
        Err(e) => return Err(precondition(&tracker, e.to_string())),
    };
    tracker.path.residuals.push(r0);
    if !(r0 < opts.residual_budget / 10.0) {
        return Err(precondition(
            &tracker,
            format!("start residual {r0:e} is not below budget/10"),
        ));
    }
    for k in 0..opts.steps {
        let t0 = k as f64 / opts.steps as f64;
        let t1 = (k + 1) as f64 / opts.steps as f64;
        tracker.advance(t0, t1, 0)?;
    }
    Ok(tracker.path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::seeds::{great_sphere_curve, sphere_in_plane};
    use crate::nk::s6::s6_background;
    use crate::octonion::standard_triple;
    use crate::ImOctonion;

    fn sphere(level: u32) -> CurveMesh {
        great_sphere_curve(&[1, 2, 3].map(ImOctonion::unit), level).unwrap()
    }

    fn quick() -> ContinuationOptions {
        ContinuationOptions {
            steps: 3,
            ..ContinuationOptions::default()
        }
    }

    #[test]
    fn g2_drive_needs_no_projection() {
        let bg = s6_background();
        let drive = Drive::G2Path {
            path: G2Path::random(2),
        };
        let fam = continue_curve(&bg, &sphere(1), &drive, &ContinuationOptions::default()).unwrap();
        assert!(fam.residuals.iter().all(|r| *r < 1e-8));
        fam.check().unwrap();
    }

    #[test]
    fn projection_restores_residual() {
        let bg = s6_background();
        let c = sphere(1);
        let bumped = c.mapped(|p| {
            let mut q = p.to_vec();
            q[3] += 0.02 * p[0] * p[1];
            q[4] += 0.01;
            bg.geometry.retract(&q)
        });
        let opts = ContinuationOptions::default();
        let (out, report) = gauss_newton_project(&bg, &bumped, &opts).unwrap();
        assert!(report.initial_l2 > 1e-3);
        assert!(report.converged, "{report:?}");
        assert!(cr_residual(&bg, &out).unwrap().l2 < opts.residual_budget);
    }

    #[test]
    fn random_drive_is_deterministic() {
        let bg = s6_background();
        let drive = Drive::RandomNormal {
            magnitude: 1e-2,
            seed: 4,
        };
        let a = continue_curve(&bg, &sphere(1), &drive, &quick()).unwrap();
        let b = continue_curve(&bg, &sphere(1), &drive, &quick()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.provenance, Provenance::Continued);
        a.check().unwrap();
    }

    #[test]
    fn absurd_drive_fails_cleanly() {
        let bg = s6_background();
        let drive = Drive::RandomNormal {
            magnitude: 10.0,
            seed: 4,
        };
        let opts = ContinuationOptions {
            max_bisections: 2,
            ..quick()
        };
        let f = continue_curve(&bg, &sphere(1), &drive, &opts).unwrap_err();
        assert_ne!(f.kind, FailureKind::Precondition);
        assert!(!f.partial.is_empty());
        f.partial.check().unwrap();
    }

    #[test]
    fn rough_start_rejected() {
        let bg = s6_background();
        let c = sphere_in_plane(standard_triple::<f64>().map(|v| v.coeffs.to_vec()), 1).unwrap();
        let drive = Drive::G2Path {
            path: G2Path::random(2),
        };
        let f = continue_curve(&bg, &c, &drive, &quick()).unwrap_err();
        assert_eq!(f.kind, FailureKind::Precondition);
    }

    #[test]
    fn drive_round_trips_through_json() {
        let d = Drive::RandomNormal {
            magnitude: 0.5,
            seed: 9,
        };
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<Drive>(&s).unwrap(), d);
        let o = ContinuationOptions::default();
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(serde_json::from_str::<ContinuationOptions>(&s).unwrap(), o);
    }
}
