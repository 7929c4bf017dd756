use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::integrals::curve_volume;
use crate::curves::mesh::CurveMesh;
use crate::error::{precondition, Result};
use crate::moduli::family::FamilyPath;
use crate::nk::background::NKBackground;

/// Default relative tolerance of the Stokes identity.
pub const STOKES_RELATIVE_TOLERANCE: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesStep {
    pub t0: f64,
    pub t1: f64,
    /// `Vol(t₁) − Vol(t₀)`.
    pub volume_change: f64,
    /// Quadrature of `dω` over the prisms swept between `t₀` and `t₁`.
    pub chain_integral: f64,
}

/// Both sides of `Vol(γ(1)) − Vol(γ(0)) = ∫_{R_γ} dω`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// `max |Vol(t)|` along the path.
    pub volume_scale: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub steps: Vec<StokesStep>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeDrift {
    pub times: Vec<f64>,
    pub volumes: Vec<f64>,
    /// `max |Vol(t) − Vol(0)|`.
    pub max_drift: f64,
    /// `max_drift / |Vol(0)|`.
    pub relative_drift: f64,
}

/// Evaluates the volume along a path.
pub fn volume_drift(bg: &NKBackground, path: &FamilyPath) -> Result<VolumeDrift> {
    if path.is_empty() {
        return Err(precondition("empty path"));
    }
    let volumes = path
        .curves
        .par_iter()
        .map(|c| curve_volume(bg, c))
        .collect::<Result<Vec<f64>>>()?;
    let max_drift = volumes
        .iter()
        .map(|v| (v - volumes[0]).abs())
        .fold(0.0, f64::max);
    Ok(VolumeDrift {
        times: path.times.clone(),
        relative_drift: max_drift / volumes[0].abs(),
        volumes,
        max_drift,
    })
}

const REFERENCE: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

/// Two splittings of the prism `(a₀a₁a₂) × [t₀, t₁]` into three tetrahedra,
/// one from each end, as (layer, corner) pairs with layer 0 at `t₀`. Each
/// carries weight ½ so the rule is symmetric under reversing time.
const TETS: [[(usize, usize); 4]; 6] = [
    [(0, 0), (0, 1), (0, 2), (1, 0)],
    [(0, 1), (0, 2), (1, 0), (1, 1)],
    [(0, 2), (1, 0), (1, 1), (1, 2)],
    [(1, 0), (1, 1), (1, 2), (0, 0)],
    [(1, 1), (1, 2), (0, 0), (0, 1)],
    [(1, 2), (0, 0), (0, 1), (0, 2)],
];

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Orientation of each tetrahedron relative to `dt ∧ ds₁ ∧ ds₂`.
fn tet_signs() -> [f64; 6] {
    TETS.map(|tet| {
        let coord = |(layer, corner): (usize, usize)| {
            [layer as f64, REFERENCE[corner][0], REFERENCE[corner][1]]
        };
        let x0 = coord(tet[0]);
        let rows = [1, 2, 3].map(|i| {
            let x = coord(tet[i]);
            [x[0] - x0[0], x[1] - x0[1], x[2] - x0[2]]
        });
        det3(rows).signum()
    })
}

/// Midpoint quadrature of `dω` over the prisms between two meshes.
fn slab_integral(bg: &NKBackground, a: &CurveMesh, b: &CurveMesh) -> f64 {
    let signs = tet_signs();
    let m = bg.manifold();
    let parts: Vec<f64> = a
        .faces
        .par_iter()
        .map(|face| {
            let layers = [a, b];
            let mut total = 0.0;
            for (tet, sign) in TETS.iter().zip(signs) {
                let pts: Vec<&[f64]> = tet
                    .iter()
                    .map(|&(l, c)| layers[l].vertices[face[c]].point.as_slice())
                    .collect();
                let edges: Vec<Vec<f64>> = (1..4).map(|i| m.chord(pts[0], pts[i])).collect();
                let raw: Vec<f64> = (0..pts[0].len())
                    .map(|k| pts[0][k] + edges.iter().map(|e| e[k]).sum::<f64>() / 4.0)
                    .collect();
                let q = m.retract(&raw);
                let pushed: Vec<Vec<f64>> = edges
                    .iter()
                    .map(|e| m.retract_differential(&raw, e))
                    .collect();
                total += sign * bg.domega.eval_vecs(&q, &pushed) / 12.0;
            }
            total
        })
        .collect();
    parts.iter().sum()
}

/// Compares the volume change along a path with the integral of `dω` over
/// the swept 3-chain, one slab of prisms per time step.
///
/// The tolerance is `relative_tolerance · max(|lhs|, volume scale)`.
pub fn stokes_check(
    bg: &NKBackground,
    path: &FamilyPath,
    relative_tolerance: f64,
) -> Result<StokesReport> {
    if path.len() < 2 {
        return Err(precondition("at least two times required"));
    }
    if path
        .curves
        .iter()
        .any(|c| !c.same_combinatorics(&path.curves[0]))
    {
        return Err(precondition("curves do not share mesh combinatorics"));
    }
    let drift = volume_drift(bg, path)?;
    let steps: Vec<StokesStep> = (1..path.len())
        .into_par_iter()
        .map(|k| StokesStep {
            t0: path.times[k - 1],
            t1: path.times[k],
            volume_change: drift.volumes[k] - drift.volumes[k - 1],
            chain_integral: slab_integral(bg, &path.curves[k - 1], &path.curves[k]),
        })
        .collect();
    let lhs = drift.volumes.last().expect("nonempty") - drift.volumes[0];
    let rhs: f64 = steps.iter().map(|s| s.chain_integral).sum();
    let volume_scale = drift.volumes.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let residual = (lhs - rhs).abs();
    let tolerance = relative_tolerance * lhs.abs().max(volume_scale);
    Ok(StokesReport {
        lhs,
        rhs,
        residual,
        volume_scale,
        tolerance,
        passed: residual < tolerance,
        steps,
    })
}
