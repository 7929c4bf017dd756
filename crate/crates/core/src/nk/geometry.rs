//! Concrete almost Hermitian geometries backing the backgrounds.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::geometry::manifold::{
    AlmostHermitian, FlatTorus, Manifold, RoundSphere, SharedGeometry,
};
use crate::linalg::dot;
use crate::nk::trig::TrigPoly;
use crate::octonion::ImOctonion;

/// `u × v = Im(uv)` on `R⁷ = Im O`.
pub fn cross7(u: &[f64], v: &[f64]) -> Vec<f64> {
    ImOctonion::from_slice(u)
        .cross(&ImOctonion::from_slice(v))
        .coeffs
        .to_vec()
}

/// `φ(x, y, z) = ⟨x × y, z⟩`.
pub fn phi7(x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    dot(&cross7(x, y), z)
}

/// Round `S⁶ ⊂ Im O` with `J_p v = p × v`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SixSphere;

impl Manifold for SixSphere {
    fn ambient_dim(&self) -> usize {
        7
    }
    fn dim(&self) -> usize {
        6
    }
    fn embedding_residual(&self, p: &[f64]) -> f64 {
        RoundSphere { ambient: 7 }.embedding_residual(p)
    }
    fn retract(&self, x: &[f64]) -> Vec<f64> {
        RoundSphere { ambient: 7 }.retract(x)
    }
    fn retract_differential(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        RoundSphere { ambient: 7 }.retract_differential(x, v)
    }
    fn project_tangent(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        RoundSphere { ambient: 7 }.project_tangent(p, v)
    }
}

impl AlmostHermitian for SixSphere {
    fn metric(&self, _p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        dot(x, y)
    }

    fn acs(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        cross7(p, v)
    }

    fn metric_sqrt(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
        v.to_vec()
    }
}

/// Left-invariant structure on a Lie group seen in its Lie algebra:
/// constant metric and `J` matrices in a fixed frame.
#[derive(Clone, Debug)]
pub struct ConstantGeometry {
    pub metric: DMatrix<f64>,
    pub acs: DMatrix<f64>,
}

impl Manifold for ConstantGeometry {
    fn ambient_dim(&self) -> usize {
        self.metric.nrows()
    }
    fn dim(&self) -> usize {
        self.metric.nrows()
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

impl AlmostHermitian for ConstantGeometry {
    fn metric(&self, _p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += x[i] * self.metric[(i, j)] * y[j];
            }
        }
        s
    }

    fn acs(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
        let n = v.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.acs[(i, j)] * v[j]).sum())
            .collect()
    }

    fn metric_matrix(&self, _p: &[f64]) -> DMatrix<f64> {
        self.metric.clone()
    }

    fn acs_matrix(&self, _p: &[f64]) -> DMatrix<f64> {
        self.acs.clone()
    }
}

/// The standard complex structure of the testbed torus:
/// `J∂₁ = −∂₂`, `J∂₂ = ∂₁` on each coordinate pair (1-based).
pub fn torus_acs(v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for i in 0..v.len() / 2 {
        out[2 * i] = v[2 * i + 1];
        out[2 * i + 1] = -v[2 * i];
    }
    out
}

/// `ω₀ = Σ dx_{2i−1} ∧ dx_{2i}` (1-based).
pub fn torus_omega0(x: &[f64], y: &[f64]) -> f64 {
    (0..x.len() / 2)
        .map(|i| x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i])
        .sum()
}

/// Flat torus `R⁶/(2πZ)⁶` with metric `e^f δ` and constant `J`.
#[derive(Clone, Debug)]
pub struct ConformalTorus {
    pub field: TrigPoly,
}

impl Manifold for ConformalTorus {
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
    fn chord(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        FlatTorus { dim: 6 }.chord(a, b)
    }
}

impl AlmostHermitian for ConformalTorus {
    fn metric(&self, p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        self.field.eval(p).exp() * dot(x, y)
    }

    fn acs(&self, _p: &[f64], v: &[f64]) -> Vec<f64> {
        torus_acs(v)
    }

    fn metric_sqrt(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        let s = (0.5 * self.field.eval(p)).exp();
        v.iter().map(|x| s * x).collect()
    }
}

/// The same manifold and metric with `J` replaced by `−J`.
#[derive(Clone)]
pub struct Conjugate(pub SharedGeometry);

impl Manifold for Conjugate {
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn embedding_residual(&self, p: &[f64]) -> f64 {
        self.0.embedding_residual(p)
    }
    fn retract(&self, x: &[f64]) -> Vec<f64> {
        self.0.retract(x)
    }
    fn retract_differential(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        self.0.retract_differential(x, v)
    }
    fn project_tangent(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        self.0.project_tangent(p, v)
    }
    fn chord(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        self.0.chord(a, b)
    }
}

impl AlmostHermitian for Conjugate {
    fn metric(&self, p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        self.0.metric(p, x, y)
    }
    fn acs(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        self.0.acs(p, v).into_iter().map(|x| -x).collect()
    }
    fn metric_sqrt(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        self.0.metric_sqrt(p, v)
    }
}

pub fn shared<G: AlmostHermitian + 'static>(g: G) -> SharedGeometry {
    Arc::new(g)
}
