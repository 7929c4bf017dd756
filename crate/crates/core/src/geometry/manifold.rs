use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::linalg::{dot, norm, scale, sub, unit, wrap_angle};

/// Embedding tolerance for "this point lies on the manifold".
pub const EMBEDDING_TOLERANCE: f64 = 1e-10;

/// A manifold presented through ambient coordinates together with a
/// nearest-point retraction, used to extend forms off the manifold.
pub trait Manifold: Send + Sync {
    fn ambient_dim(&self) -> usize;

    fn dim(&self) -> usize;

    /// Distance-like measure of how far `p` is from the manifold.
    fn embedding_residual(&self, p: &[f64]) -> f64;

    fn retract(&self, x: &[f64]) -> Vec<f64>;

    /// Differential of [`Manifold::retract`] at `x` applied to `v`.
    fn retract_differential(&self, x: &[f64], v: &[f64]) -> Vec<f64>;

    /// Euclidean-orthogonal projection of `v` onto `T_pM`.
    fn project_tangent(&self, p: &[f64], v: &[f64]) -> Vec<f64>;

    /// Displacement from `a` to `b` in ambient coordinates.
    fn chord(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        sub(b, a)
    }
}

/// Unit sphere `S^{n-1} ⊂ Rⁿ`; retraction `x ↦ x/|x|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundSphere {
    pub ambient: usize,
}

impl Manifold for RoundSphere {
    fn ambient_dim(&self) -> usize {
        self.ambient
    }

    fn dim(&self) -> usize {
        self.ambient - 1
    }

    fn embedding_residual(&self, p: &[f64]) -> f64 {
        (norm(p) - 1.0).abs()
    }

    fn retract(&self, x: &[f64]) -> Vec<f64> {
        scale(x, 1.0 / norm(x))
    }

    fn retract_differential(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        let r = norm(x);
        let along = dot(x, v) / (r * r);
        x.iter()
            .zip(v)
            .map(|(xi, vi)| (vi - along * xi) / r)
            .collect()
    }

    fn project_tangent(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        let along = dot(p, v) / dot(p, p);
        p.iter().zip(v).map(|(pi, vi)| vi - along * pi).collect()
    }
}

/// `Rⁿ/(2πZ)ⁿ` with points stored as unreduced coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatTorus {
    pub dim: usize,
}

impl Manifold for FlatTorus {
    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embedding_residual(&self, _p: &[f64]) -> f64 {
        0.0
    }

    fn retract(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }

    fn retract_differential(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }

    fn project_tangent(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }

    fn chord(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| wrap_angle(y - x)).collect()
    }
}

/// Tangent space at the identity of a Lie group, in a left-invariant
/// frame. Tensors of homogeneous backgrounds are constant in this frame,
/// so every point stands for the identity coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomogeneousChart {
    pub dim: usize,
}

impl Manifold for HomogeneousChart {
    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embedding_residual(&self, _p: &[f64]) -> f64 {
        0.0
    }

    fn retract(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }

    fn retract_differential(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }

    fn project_tangent(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }
}

/// A tangent vector in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub base: Vec<f64>,
    pub vec: Vec<f64>,
}

/// Orthogonal projection of an ambient vector onto `T_pM`.
pub fn tangent_project(manifold: &dyn Manifold, p: &[f64], v: &[f64]) -> Result<TangentVector> {
    if p.len() != manifold.ambient_dim() || v.len() != manifold.ambient_dim() {
        return Err(precondition("dimension mismatch in tangent_project"));
    }
    let off = manifold.embedding_residual(p);
    if off > EMBEDDING_TOLERANCE {
        return Err(precondition(format!(
            "point is {off:e} away from the manifold"
        )));
    }
    Ok(TangentVector {
        base: p.to_vec(),
        vec: manifold.project_tangent(p, v),
    })
}

/// Pointwise linear-algebra data of an almost Hermitian structure, in
/// ambient coordinates.
#[derive(Clone, Debug)]
pub struct PointStructure {
    pub point: Vec<f64>,
    /// Projections of the ambient coordinate axes onto `T_pM`, in index order.
    pub tangent_seeds: Vec<Vec<f64>>,
    pub metric: DMatrix<f64>,
    pub acs: DMatrix<f64>,
}

impl PointStructure {
    pub fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * self.metric[(i, j)] * y[j];
            }
        }
        s
    }

    pub fn j(&self, v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.acs[(i, j)] * v[j]).sum())
            .collect()
    }
}

/// Metric `g` and almost complex structure `J` on a manifold.
pub trait AlmostHermitian: Manifold {
    fn metric(&self, p: &[f64], x: &[f64], y: &[f64]) -> f64;

    fn acs(&self, p: &[f64], v: &[f64]) -> Vec<f64>;

    /// A linear map `L` with `|Lv|² = g_p(v, v)` on tangent vectors.
    fn metric_sqrt(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        let g = self.metric_matrix(p);
        let n = g.nrows();
        // Regularise the normal directions so the factorisation exists.
        let proj = DMatrix::from_fn(n, n, |i, j| {
            let e = unit(n, j);
            self.project_tangent(p, &e)[i]
        });
        let id = DMatrix::identity(n, n);
        let reg = &proj.transpose() * &g * &proj + (&id - &proj).transpose() * (&id - &proj);
        let l = reg
            .cholesky()
            .expect("metric is positive definite")
            .l()
            .transpose();
        let w = &l * nalgebra::DVector::from_column_slice(v);
        w.iter().copied().collect()
    }

    fn metric_matrix(&self, p: &[f64]) -> DMatrix<f64> {
        let n = self.ambient_dim();
        let basis: Vec<Vec<f64>> = (0..n).map(|i| unit(n, i)).collect();
        DMatrix::from_fn(n, n, |i, j| self.metric(p, &basis[i], &basis[j]))
    }

    fn acs_matrix(&self, p: &[f64]) -> DMatrix<f64> {
        let n = self.ambient_dim();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.acs(p, &unit(n, j));
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    fn structure_at(&self, p: &[f64]) -> PointStructure {
        let n = self.ambient_dim();
        PointStructure {
            point: p.to_vec(),
            tangent_seeds: (0..n)
                .map(|i| self.project_tangent(p, &unit(n, i)))
                .collect(),
            metric: self.metric_matrix(p),
            acs: self.acs_matrix(p),
        }
    }
}

/// Flat `C³ = R⁶` with `J ∂_{2i} = ∂_{2i+1}` (0-based) and Euclidean metric;
/// the linear-algebra model case for coframes and type decompositions.
#[derive(Clone, Copy, Debug, Default)]
pub struct FlatModel;

impl Manifold for FlatModel {
    fn ambient_dim(&self) -> usize {
        6
    }
    fn dim(&self) -> usize {
        6
    }
    fn embedding_residual(&self, _p: &[f64]) -> f64 {
        0.0
    }
    fn retract(&self, x: &[f64]) -> Vec<f64> {
        x.to_vec()
    }
    fn retract_differential(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }
    fn project_tangent(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }
}

impl AlmostHermitian for FlatModel {
    fn metric(&self, _p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        dot(x, y)
    }

    fn acs(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
        vec![-v[1], v[0], -v[3], v[2], -v[5], v[4]]
    }

    fn metric_sqrt(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }
}

pub type SharedGeometry = Arc<dyn AlmostHermitian>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_idempotent_on_sphere() {
        let s = RoundSphere { ambient: 7 };
        let p = s.retract(&[0.3, -0.2, 0.5, 0.1, 0.9, -0.4, 0.2]);
        let v = [1.0, 2.0, -0.5, 0.3, 0.0, 0.7, -1.1];
        let t = tangent_project(&s, &p, &v).unwrap();
        assert!(dot(&t.vec, &p).abs() < 1e-14);
        let again = tangent_project(&s, &p, &t.vec).unwrap();
        for (a, b) in again.vec.iter().zip(&t.vec) {
            assert!((a - b).abs() < 1e-14);
        }
        let radial = tangent_project(&s, &p, &p).unwrap();
        assert!(norm(&radial.vec) < 1e-15);
    }

    #[test]
    fn tangent_vector_is_fixed() {
        let s = RoundSphere { ambient: 7 };
        let p = unit(7, 0);
        let v = unit(7, 3);
        assert_eq!(tangent_project(&s, &p, &v).unwrap().vec, v);
    }

    #[test]
    fn off_manifold_point_rejected() {
        let s = RoundSphere { ambient: 7 };
        let p = scale(&unit(7, 0), 1.01);
        assert!(tangent_project(&s, &p, &unit(7, 1)).is_err());
    }

    #[test]
    fn retraction_differential_matches_difference_quotient() {
        let s = RoundSphere { ambient: 7 };
        let x = [0.7, -0.2, 0.4, 1.1, 0.0, 0.3, -0.6];
        let v = [0.1, 0.5, -0.3, 0.2, 0.9, -0.4, 0.25];
        let h = 1e-6;
        let plus = s.retract(&crate::linalg::axpy(&x, h, &v));
        let minus = s.retract(&crate::linalg::axpy(&x, -h, &v));
        let fd = scale(&sub(&plus, &minus), 0.5 / h);
        let exact = s.retract_differential(&x, &v);
        for (a, b) in fd.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn torus_chord_wraps() {
        use std::f64::consts::PI;
        let t = FlatTorus { dim: 2 };
        let c = t.chord(&[2.0 * PI - 0.1, 0.0], &[0.1, 0.0]);
        assert!((c[0] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn metric_sqrt_default_factorises() {
        struct Scaled;
        impl Manifold for Scaled {
            fn ambient_dim(&self) -> usize {
                2
            }
            fn dim(&self) -> usize {
                2
            }
            fn embedding_residual(&self, _p: &[f64]) -> f64 {
                0.0
            }
            fn retract(&self, x: &[f64]) -> Vec<f64> {
                x.to_vec()
            }
            fn retract_differential(&self, _x: &[f64], v: &[f64]) -> Vec<f64> {
                v.to_vec()
            }
            fn project_tangent(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
                v.to_vec()
            }
        }
        impl AlmostHermitian for Scaled {
            fn metric(&self, _p: &[f64], x: &[f64], y: &[f64]) -> f64 {
                2.0 * x[0] * y[0] + 0.5 * (x[0] * y[1] + x[1] * y[0]) + 3.0 * x[1] * y[1]
            }
            fn acs(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
                vec![-v[1], v[0]]
            }
        }
        let v = [0.3, -1.2];
        let l = Scaled.metric_sqrt(&[0.0, 0.0], &v);
        assert!((dot(&l, &l) - Scaled.metric(&[0.0, 0.0], &v, &v)).abs() < 1e-12);
    }
}
