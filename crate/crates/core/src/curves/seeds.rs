use std::f64::consts::TAU;

use crate::curves::mesh::{icosphere, spherical_triangle_area, CurveMesh, MeshVertex};
use crate::error::{precondition, Result};
use crate::linalg::{dot, norm};
use crate::nk::background::{BackgroundSpec, NKBackground};
use crate::nk::geometry::{cross7, phi7};
use crate::octonion::ImOctonion;

/// Tolerance on orthonormality and associativity of a seed triple.
pub const TRIPLE_TOLERANCE: f64 = 1e-10;

fn orthonormality_residual(b: &[Vec<f64>; 3]) -> f64 {
    let mut r = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            r = r.max((dot(&b[i], &b[j]) - target).abs());
        }
    }
    r
}

/// How far `span(b)` is from being closed under the cross product.
pub fn associativity_residual(b: &[Vec<f64>; 3]) -> f64 {
    let mut r = 0.0f64;
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let c = cross7(&b[i], &b[j]);
        let mut out = c.clone();
        for e in b {
            let k = dot(&c, e);
            for (o, x) in out.iter_mut().zip(e) {
                *o -= k * x;
            }
        }
        r = r.max(norm(&out));
    }
    r
}

/// Unit sphere of `span(f₁, f₂, f₃) ⊂ Im O` as an icosphere mesh,
/// parameterised linearly by `x ↦ Σ x_i f_i`.
///
/// Wound so that the `ω`-volume is positive when the plane is associative:
/// inward when `φ(f₁, f₂, f₃) > 0`, outward otherwise.
pub fn sphere_in_plane(basis: [Vec<f64>; 3], level: u32) -> Result<CurveMesh> {
    if basis.iter().any(|b| b.len() != 7) {
        return Err(precondition("basis vectors must lie in Im O = R⁷"));
    }
    let r = orthonormality_residual(&basis);
    if r > TRIPLE_TOLERANCE {
        return Err(precondition(format!(
            "basis is not orthonormal (residual {r:e})"
        )));
    }
    let (verts, mut faces) = icosphere(level);
    if phi7(&basis[0], &basis[1], &basis[2]) > 0.0 {
        for f in &mut faces {
            f.swap(1, 2);
        }
    }
    let vertices = verts
        .iter()
        .map(|x| MeshVertex {
            domain: x.to_vec(),
            point: (0..7)
                .map(|k| x[0] * basis[0][k] + x[1] * basis[1][k] + x[2] * basis[2][k])
                .collect(),
        })
        .collect();
    let weights = faces
        .iter()
        .map(|[a, b, c]| spherical_triangle_area(&verts[*a], &verts[*b], &verts[*c]))
        .collect();
    Ok(CurveMesh {
        background: BackgroundSpec::S6,
        genus: 0,
        vertices,
        faces,
        weights,
    })
}

/// A totally geodesic pseudoholomorphic sphere: the unit sphere of an
/// associative 3-plane.
pub fn great_sphere_curve(triple: &[ImOctonion<f64>; 3], level: u32) -> Result<CurveMesh> {
    let basis = [
        triple[0].coeffs.to_vec(),
        triple[1].coeffs.to_vec(),
        triple[2].coeffs.to_vec(),
    ];
    let r = associativity_residual(&basis);
    if r > TRIPLE_TOLERANCE {
        return Err(precondition(format!(
            "span of the triple is not associative (residual {r:e})"
        )));
    }
    sphere_in_plane(basis, level)
}

/// The flat 2-torus `(u, v) ↦ (u, v, 2πt·s)` in the testbed, with
/// `shift = s ∈ R⁴` acting on `x₃ … x₆`; `n × n` grid, two triangles per cell.
pub fn subtorus_family(bg: &NKBackground, t: f64, shift: [f64; 4], n: usize) -> Result<CurveMesh> {
    if !matches!(bg.spec, BackgroundSpec::Torus { .. }) {
        return Err(precondition("subtori live on the torus testbed"));
    }
    if n < 3 {
        return Err(precondition("grid resolution must be at least 3"));
    }
    let h = TAU / n as f64;
    let offset: Vec<f64> = shift.iter().map(|s| TAU * t * s).collect();
    let mut vertices = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let (u, v) = (i as f64 * h, j as f64 * h);
            let mut point = vec![u, v];
            point.extend(&offset);
            vertices.push(MeshVertex {
                domain: vec![u, v],
                point,
            });
        }
    }
    let idx = |i: usize, j: usize| (j % n) * n + (i % n);
    let mut faces = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    let weights = vec![0.5 * h * h; faces.len()];
    Ok(CurveMesh {
        background: bg.spec.clone(),
        genus: 1,
        vertices,
        faces,
        weights,
    })
}
