use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::geometry::manifold::EMBEDDING_TOLERANCE;
use crate::linalg::{norm, wrap_angle};
use crate::nk::background::{BackgroundSpec, NKBackground};
use crate::octonion::G2Element;

/// Tolerance on the total quadrature weight.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshVertex {
    /// Genus 0: a point of the unit sphere `S² ⊂ R³`.
    /// Genus 1: `(u, v) ∈ [0, 2π)²`.
    pub domain: Vec<f64>,
    /// Image point in ambient coordinates of the background.
    pub point: Vec<f64>,
}

/// A closed parameterised surface: a triangulated domain, the image of each
/// vertex, and per-face domain-area quadrature weights.
///
/// Faces are wound so that the curve's `ω`-volume is positive for the seed
/// curves built in this crate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveMesh {
    pub background: BackgroundSpec,
    pub genus: u8,
    pub vertices: Vec<MeshVertex>,
    pub faces: Vec<[usize; 3]>,
    pub weights: Vec<f64>,
}

impl CurveMesh {
    /// Area of the reference domain: `4π` for the unit sphere, `(2π)²` for
    /// the square torus.
    pub fn reference_area(&self) -> f64 {
        reference_area(self.genus)
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }

    /// Same domain and combinatorics with new image points.
    pub fn with_points(&self, points: Vec<Vec<f64>>) -> CurveMesh {
        debug_assert_eq!(points.len(), self.vertices.len());
        let mut out = self.clone();
        for (v, p) in out.vertices.iter_mut().zip(points) {
            v.point = p;
        }
        out
    }

    pub fn mapped(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> CurveMesh {
        self.with_points(self.vertices.iter().map(|v| f(&v.point)).collect())
    }

    /// Image under a `G₂` element acting on `Im O`.
    pub fn apply_g2(&self, m: &G2Element<f64>) -> CurveMesh {
        self.mapped(|p| m.apply_slice(p))
    }

    /// The same mesh with every face wound the other way.
    pub fn reversed(&self) -> CurveMesh {
        let mut out = self.clone();
        for f in &mut out.faces {
            f.swap(1, 2);
        }
        out
    }

    pub fn same_combinatorics(&self, other: &CurveMesh) -> bool {
        self.genus == other.genus
            && self.faces == other.faces
            && self.vertices.len() == other.vertices.len()
            && self
                .vertices
                .iter()
                .zip(&other.vertices)
                .all(|(a, b)| a.domain == b.domain)
    }

    /// Domain displacement from vertex `i` to vertex `j`, padded to `R³`.
    pub fn domain_edge(&self, i: usize, j: usize) -> [f64; 3] {
        let (a, b) = (&self.vertices[i].domain, &self.vertices[j].domain);
        match self.genus {
            0 => [b[0] - a[0], b[1] - a[1], b[2] - a[2]],
            _ => [wrap_angle(b[0] - a[0]), wrap_angle(b[1] - a[1]), 0.0],
        }
    }

    /// Longest domain edge.
    pub fn mesh_size(&self) -> f64 {
        let mut h = 0.0f64;
        for f in &self.faces {
            for k in 0..3 {
                let e = self.domain_edge(f[k], f[(k + 1) % 3]);
                h = h.max(norm(&e));
            }
        }
        h
    }

    pub fn euler_characteristic(&self) -> i64 {
        let edges: BTreeSet<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| (0..3).map(move |k| (f[k].min(f[(k + 1) % 3]), f[k].max(f[(k + 1) % 3]))))
            .collect();
        self.vertices.len() as i64 - edges.len() as i64 + self.faces.len() as i64
    }

    /// Checks the mesh invariants against a background.
    pub fn validate(&self, bg: &NKBackground) -> Result<()> {
        if self.background != bg.spec {
            return Err(precondition(format!(
                "mesh lives on {:?}, background is {:?}",
                self.background, bg.spec
            )));
        }
        if self.genus > 1 {
            return Err(Error::MeshQuality(format!(
                "unsupported genus {}",
                self.genus
            )));
        }
        if self.weights.len() != self.faces.len() {
            return Err(Error::MeshQuality("one weight per face required".into()));
        }
        let dim = bg.geometry.ambient_dim();
        for (k, v) in self.vertices.iter().enumerate() {
            if v.point.len() != dim {
                return Err(Error::MeshQuality(format!(
                    "vertex {k} has wrong dimension"
                )));
            }
            let off = bg.geometry.embedding_residual(&v.point);
            if !(off <= EMBEDDING_TOLERANCE) {
                return Err(Error::MeshQuality(format!(
                    "vertex {k} is {off:e} off the background"
                )));
            }
        }
        if self
            .faces
            .iter()
            .flatten()
            .any(|&i| i >= self.vertices.len())
        {
            return Err(Error::MeshQuality("face index out of range".into()));
        }
        // Closed and consistently oriented: each directed edge once, paired
        // with its reverse.
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in &self.faces {
            for k in 0..3 {
                *directed.entry((f[k], f[(k + 1) % 3])).or_default() += 1;
            }
        }
        for (&(i, j), &n) in &directed {
            if n != 1 || directed.get(&(j, i)) != Some(&1) {
                return Err(Error::MeshQuality(format!(
                    "edge ({i}, {j}) is not shared by exactly two oppositely oriented faces"
                )));
            }
        }
        let chi = self.euler_characteristic();
        let expect = 2 - 2 * self.genus as i64;
        if chi != expect {
            return Err(Error::MeshQuality(format!(
                "Euler characteristic {chi}, expected {expect}"
            )));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - self.reference_area()).abs() > WEIGHT_TOLERANCE * self.reference_area().max(1.0)
        {
            return Err(Error::MeshQuality(format!(
                "weights sum to {total}, expected {}",
                self.reference_area()
            )));
        }
        Ok(())
    }

    /// Largest vertex displacement between two meshes, measured by chords.
    pub fn max_vertex_displacement(&self, other: &CurveMesh, bg: &NKBackground) -> f64 {
        self.vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| norm(&bg.geometry.chord(&a.point, &b.point)))
            .fold(0.0, f64::max)
    }
}

pub fn reference_area(genus: u8) -> f64 {
    use std::f64::consts::PI;
    match genus {
        0 => 4.0 * PI,
        _ => 4.0 * PI * PI,
    }
}

/// Area of the spherical triangle with unit-vector corners.
pub fn spherical_triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let bc = [
        b[1] * c[2] - b[2] * c[1],
        b[2] * c[0] - b[0] * c[2],
        b[0] * c[1] - b[1] * c[0],
    ];
    let triple = a[0] * bc[0] + a[1] * bc[1] + a[2] * bc[2];
    let dot = |x: &[f64], y: &[f64]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    let denom = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * triple.abs().atan2(denom)
}

/// Outward-wound icosphere: the icosahedron refined `level` times by edge
/// midpoints projected to the unit sphere.
pub fn icosphere(level: u32) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let unit = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let mut verts: Vec<[f64; 3]> = raw.iter().map(|v| unit(*v)).collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut cache: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut midpoint = |i: usize, j: usize, verts: &mut Vec<[f64; 3]>| {
            *cache.entry((i.min(j), i.max(j))).or_insert_with(|| {
                let (a, b) = (verts[i], verts[j]);
                verts.push(unit([a[0] + b[0], a[1] + b[1], a[2] + b[2]]));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (verts, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sub;

    /// Signed orientation of a face relative to the outward normal of `S²`.
    fn outward_orientation(verts: &[[f64; 3]], f: &[usize; 3]) -> f64 {
        let (a, b, c) = (verts[f[0]], verts[f[1]], verts[f[2]]);
        let u = sub(&b, &a);
        let v = sub(&c, &a);
        let n = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        n[0] * a[0] + n[1] * a[1] + n[2] * a[2]
    }

    #[test]
    fn icosphere_counts_and_orientation() {
        for level in 0..4 {
            let (v, f) = icosphere(level);
            assert_eq!(f.len(), 20 * 4usize.pow(level));
            assert_eq!(v.len(), 10 * 4usize.pow(level) + 2);
            assert!(f.iter().all(|face| outward_orientation(&v, face) > 0.0));
        }
    }

    #[test]
    fn spherical_areas_sum_to_four_pi() {
        let (v, f) = icosphere(4);
        let total: f64 = f
            .iter()
            .map(|[a, b, c]| spherical_triangle_area(&v[*a], &v[*b], &v[*c]))
            .sum();
        assert!((total - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn octant_area() {
        let a = spherical_triangle_area(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]);
        assert!((a - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
