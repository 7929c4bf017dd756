use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::manifold::PointStructure;

/// Tolerance on `J² = −1`, compatibility and tangency when building a coframe.
pub const STRUCTURE_TOLERANCE: f64 = 1e-8;

/// Seeds shorter than this after orthogonalisation are skipped.
const SEED_CUTOFF: f64 = 1e-6;

/// A unitary `(1,0)`-coframe `θ^a = g(·, e_a) + i·g(·, J e_a)` at one point,
/// built from a `g`-orthonormal real frame `(e₁, Je₁, e₂, Je₂, …)`.
///
/// The dual `(1,0)`-vectors are `U_a = (e_a − iJe_a)/√2`.
#[derive(Clone, Debug)]
pub struct UnitaryCoframe {
    pub point: Vec<f64>,
    /// `(e₁, Je₁, e₂, Je₂, …)`
    pub real_frame: Vec<Vec<f64>>,
    pub metric: DMatrix<f64>,
}

fn bilinear(m: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            s += x[i] * m[(i, j)] * y[j];
        }
    }
    s
}

fn apply(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

fn structural(msg: String) -> Error {
    Error::Structural(msg)
}

/// Builds the coframe by Gram–Schmidt of the tangent seeds, smallest index
/// first, closing each new vector under `J`.
pub fn build_unitary_coframe(s: &PointStructure) -> Result<UnitaryCoframe> {
    let n = s.point.len();
    // The seeds are the columns of the tangent projector.
    let project = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (j, seed) in s.tangent_seeds.iter().enumerate() {
            if v[j] != 0.0 {
                for i in 0..n {
                    out[i] += v[j] * seed[i];
                }
            }
        }
        out
    };
    let mut frame: Vec<Vec<f64>> = Vec::new();
    for seed in &s.tangent_seeds {
        let mut v = seed.clone();
        for _ in 0..2 {
            for f in &frame {
                let c = bilinear(&s.metric, &v, f);
                for (vi, fi) in v.iter_mut().zip(f) {
                    *vi -= c * fi;
                }
            }
        }
        let len = bilinear(&s.metric, &v, &v).max(0.0).sqrt();
        if len < SEED_CUTOFF {
            continue;
        }
        let e: Vec<f64> = v.iter().map(|x| x / len).collect();
        let je = s.j(&e);
        check_vector(s, &e, &je, &project)?;
        frame.push(e);
        frame.push(je);
    }
    if frame.is_empty() {
        return Err(structural("tangent space is trivial".into()));
    }
    let m = frame.len();
    for a in 0..m {
        for b in a..m {
            let target = if a == b { 1.0 } else { 0.0 };
            let got = bilinear(&s.metric, &frame[a], &frame[b]);
            if (got - target).abs() > STRUCTURE_TOLERANCE {
                return Err(structural(format!(
                    "J is not compatible with g: frame Gram entry ({a},{b}) = {got:e}"
                )));
            }
        }
    }
    // Compatibility on mixed pairs: g(Jx, Jy) = g(x, y).
    for a in 0..m {
        let ja = s.j(&frame[a]);
        for b in a..m {
            let jb = s.j(&frame[b]);
            let err = bilinear(&s.metric, &ja, &jb) - bilinear(&s.metric, &frame[a], &frame[b]);
            if err.abs() > STRUCTURE_TOLERANCE {
                return Err(structural(format!("g(J·,J·) ≠ g by {err:e}")));
            }
        }
    }
    Ok(UnitaryCoframe {
        point: s.point.clone(),
        real_frame: frame,
        metric: s.metric.clone(),
    })
}

fn check_vector(
    s: &PointStructure,
    e: &[f64],
    je: &[f64],
    project: &dyn Fn(&[f64]) -> Vec<f64>,
) -> Result<()> {
    let jje = apply(&s.acs, je);
    let sq: f64 = jje
        .iter()
        .zip(e)
        .map(|(a, b)| (a + b).abs())
        .fold(0.0, f64::max);
    if sq > STRUCTURE_TOLERANCE {
        return Err(structural(format!("J² ≠ −1 by {sq:e}")));
    }
    let off: f64 = project(je)
        .iter()
        .zip(je)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if off > STRUCTURE_TOLERANCE {
        return Err(structural(format!("J leaves the tangent space by {off:e}")));
    }
    Ok(())
}

impl UnitaryCoframe {
    pub fn complex_dim(&self) -> usize {
        self.real_frame.len() / 2
    }

    /// `θ^a(v)` for `a = 0..complex_dim()`.
    pub fn theta(&self, v: &[f64]) -> Vec<Complex64> {
        (0..self.complex_dim())
            .map(|a| {
                Complex64::new(
                    bilinear(&self.metric, v, &self.real_frame[2 * a]),
                    bilinear(&self.metric, v, &self.real_frame[2 * a + 1]),
                )
            })
            .collect()
    }

    /// The `(1,0)`-vectors `U_a` followed by their conjugates, as complex
    /// ambient vectors.
    pub fn complex_frame(&self) -> Vec<Vec<Complex64>> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = Vec::with_capacity(self.real_frame.len());
        for sign in [-1.0, 1.0] {
            for a in 0..self.complex_dim() {
                let (e, je) = (&self.real_frame[2 * a], &self.real_frame[2 * a + 1]);
                out.push(
                    e.iter()
                        .zip(je)
                        .map(|(x, y)| Complex64::new(s * x, sign * s * y))
                        .collect(),
                );
            }
        }
        out
    }

    /// Coordinates `g(w, f_i)` of complex vectors `w` against a
    /// `g`-orthonormal real frame.
    pub fn coordinates(&self, w: &[Complex64], frame: &[Vec<f64>]) -> Vec<Complex64> {
        let re: Vec<f64> = w.iter().map(|z| z.re).collect();
        let im: Vec<f64> = w.iter().map(|z| z.im).collect();
        frame
            .iter()
            .map(|f| {
                Complex64::new(
                    bilinear(&self.metric, &re, f),
                    bilinear(&self.metric, &im, f),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::manifold::{AlmostHermitian, FlatModel};

    #[test]
    fn flat_model_gives_coordinate_frame() {
        let s = FlatModel.structure_at(&[0.0; 6]);
        let c = build_unitary_coframe(&s).unwrap();
        assert_eq!(c.complex_dim(), 3);
        for (i, f) in c.real_frame.iter().enumerate() {
            for (j, x) in f.iter().enumerate() {
                assert_eq!(*x, if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn theta_is_complex_linear() {
        let s = FlatModel.structure_at(&[0.0; 6]);
        let c = build_unitary_coframe(&s).unwrap();
        let v = [0.3, -1.2, 0.5, 2.0, -0.7, 0.1];
        let jv = s.j(&v);
        let i = Complex64::new(0.0, 1.0);
        for (a, b) in c.theta(&jv).iter().zip(c.theta(&v)) {
            assert!((a - i * b).norm() < 1e-14);
        }
    }

    #[test]
    fn incompatible_metric_rejected() {
        let mut s = FlatModel.structure_at(&[0.0; 6]);
        s.metric[(0, 0)] = 1.01;
        assert!(matches!(
            build_unitary_coframe(&s),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn non_complex_structure_rejected() {
        let mut s = FlatModel.structure_at(&[0.0; 6]);
        s.acs[(1, 0)] = 1.01;
        assert!(matches!(
            build_unitary_coframe(&s),
            Err(Error::Structural(_))
        ));
    }
}
