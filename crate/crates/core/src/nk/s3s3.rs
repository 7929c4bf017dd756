use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::geometry::form::FormField;
use crate::nk::background::{BackgroundSpec, DerivativeMethod, NKBackground};
use crate::nk::checks::type_residual_at;
use crate::nk::geometry::ConstantGeometry;

/// Left-invariant metric `a Σ(ξ_i² + ξ'_i²) + b Σ(ξ_i ξ'_i + ξ'_i ξ_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct S3S3MetricParams {
    pub a: f64,
    pub b: f64,
    /// List the second factor first.
    #[serde(default)]
    pub swap_factors: bool,
}

impl S3S3MetricParams {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            swap_factors: false,
        }
    }

    /// Gram matrix in the frame `(E₁, E₂, E₃, E'₁, E'₂, E'₃)`.
    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::from_fn(6, 6, |i, j| {
            if i == j {
                self.a
            } else if i % 3 == j % 3 {
                self.b
            } else {
                0.0
            }
        })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .gram()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0.0 && self.eigenvalues()[0] > 0.0
    }

    /// `J` on each plane `span(E_i, E'_i)`: the `g`-compatible quarter turn
    /// `G⁻¹ [[0, w], [−w, 0]]` with `w = √(a² − b²)`; at `b = 0` it sends
    /// `E_i ↦ −E'_i`, `E'_i ↦ E_i`, i.e. `ξ_i ∘ J = ξ'_i` on covectors.
    /// Listing the factors the other way round flips its sign.
    pub fn acs(&self) -> DMatrix<f64> {
        let (a, b) = (self.a, self.b);
        let w = (a * a - b * b).sqrt();
        let sign = if self.swap_factors { -1.0 } else { 1.0 };
        let block = [[b / w, a / w], [-a / w, -b / w]];
        DMatrix::from_fn(6, 6, |i, j| {
            if i % 3 == j % 3 {
                sign * block[i / 3][j / 3]
            } else {
                0.0
            }
        })
    }

    /// `g(·, J·)` as a matrix.
    pub fn omega_matrix(&self) -> DMatrix<f64> {
        self.gram() * self.acs()
    }
}

/// `[E_i, E_j] = Σ_k c[i][j][k] E_k` for `su(2) ⊕ su(2)` with
/// `[E₁, E₂] = E₃` cyclically in each factor, so `dξ_i = −ξ_j ∧ ξ_k`.
pub fn structure_constants() -> [[[f64; 6]; 6]; 6] {
    let mut c = [[[0.0; 6]; 6]; 6];
    for base in [0, 3] {
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[base + i][base + j][base + k] = 1.0;
            c[base + j][base + i][base + k] = -1.0;
        }
    }
    c
}

/// The structure constants as rows `(i, j, [E_i, E_j])` for `i < j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureConstantTable {
    pub basis: Vec<String>,
    pub rows: Vec<StructureConstantRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureConstantRow {
    pub i: usize,
    pub j: usize,
    pub bracket: [f64; 6],
}

pub fn structure_constant_table() -> StructureConstantTable {
    let c = structure_constants();
    let mut rows = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            rows.push(StructureConstantRow {
                i,
                j,
                bracket: c[i][j],
            });
        }
    }
    StructureConstantTable {
        basis: ["E1", "E2", "E3", "E1'", "E2'", "E3'"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
    }
}

fn bracket(c: &[[[f64; 6]; 6]; 6], x: &[f64], y: &[f64]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for i in 0..6 {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..6 {
            if y[j] == 0.0 {
                continue;
            }
            for k in 0..6 {
                out[k] += x[i] * y[j] * c[i][j][k];
            }
        }
    }
    out
}

fn quadratic(m: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..6 {
        for j in 0..6 {
            s += x[i] * m[(i, j)] * y[j];
        }
    }
    s
}

/// Exact `dω` of a left-invariant 2-form on left-invariant arguments:
/// `dω(X, Y, Z) = −ω([X,Y], Z) + ω([X,Z], Y) − ω([Y,Z], X)`.
pub fn maurer_cartan_d2(w: &DMatrix<f64>, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
    let c = structure_constants();
    -quadratic(w, &bracket(&c, x, y), z) + quadratic(w, &bracket(&c, x, z), y)
        - quadratic(w, &bracket(&c, y, z), x)
}

/// Exact `dξ` of a left-invariant 1-form `ξ = ⟨coeffs, ·⟩`: `dξ(X,Y) = −ξ([X,Y])`.
pub fn maurer_cartan_d1(coeffs: &[f64], x: &[f64], y: &[f64]) -> f64 {
    let b = bracket(&structure_constants(), x, y);
    -coeffs.iter().zip(&b).map(|(a, b)| a * b).sum::<f64>()
}

/// `S³ × S³` with a left-invariant metric from the `(a, b)` family; tensors
/// are constant in the left-invariant frame and every point stands for the
/// identity.
pub fn s3s3_background(params: S3S3MetricParams) -> Result<NKBackground> {
    if !(params.a > 0.0) || !(params.b.abs() < params.a) || !params.is_positive_definite() {
        return Err(precondition(format!(
            "metric parameters a = {}, b = {} are not positive definite",
            params.a, params.b
        )));
    }
    let w = params.omega_matrix();
    let w1 = w.clone();
    let omega = FormField::new(2, 1.0, move |_, v| quadratic(&w1, v[0], v[1])).expect("valid");
    let domega =
        FormField::new(3, 1.0, move |_, v| maurer_cartan_d2(&w, v[0], v[1], v[2])).expect("valid");
    Ok(NKBackground {
        spec: BackgroundSpec::S3s3 {
            a: params.a,
            b: params.b,
            swap_factors: params.swap_factors,
        },
        geometry: Arc::new(ConstantGeometry {
            metric: params.gram(),
            acs: params.acs(),
        }),
        omega,
        domega,
        domega_method: DerivativeMethod::MaurerCartan,
        omega_3_0: None,
        structure_constant: None,
    })
}

/// `r(b) = ‖(dω)^{(2,1)+(1,2)}‖ / ‖dω‖` at the identity, for `a = 1`.
pub fn s3s3_type_residual(b: f64, swap_factors: bool) -> Result<f64> {
    let bg = s3s3_background(S3S3MetricParams {
        a: 1.0,
        b,
        swap_factors,
    })?;
    Ok(type_residual_at(&bg, &[0.0; 6])?.mixed_fraction())
}

/// Result of the golden-section search over `b` at `a = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NkMetricSearch {
    pub b_star: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub converged: bool,
    pub iterations: usize,
    pub interval: [f64; 2],
    /// `(b, r(b))` on a uniform grid across the interval.
    pub samples: Vec<[f64; 2]>,
}

/// Golden-section minimisation of the type residual over `b ∈ [lo, hi]`.
///
/// Failure to reach `tolerance` is reported through `converged = false`.
pub fn find_nk_metric(lo: f64, hi: f64, tolerance: f64) -> Result<NkMetricSearch> {
    if !(lo < hi) {
        return Err(precondition(format!("empty search interval [{lo}, {hi}]")));
    }
    if !(lo > -1.0 && hi < 1.0) {
        return Err(precondition("search interval must lie inside |b| < 1"));
    }
    let r = |b: f64| s3s3_type_residual(b, false);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (r(c)?, r(d)?);
    let mut iterations = 0;
    while b - a > 1e-15 && iterations < 200 {
        iterations += 1;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = r(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = r(d)?;
        }
    }
    let (b_star, residual) = [(c, fc), (d, fd), (a, r(a)?), (b, r(b)?)]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("nonempty");
    let samples = (0..=20)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / 20.0;
            Ok([t, r(t)?])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NkMetricSearch {
        b_star,
        residual,
        tolerance,
        converged: residual < tolerance,
        iterations,
        interval: [lo, hi],
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;

    #[test]
    fn structure_equation_anchor() {
        // dξ₁ = −ξ₂∧ξ₃: dξ₁(E₂, E₃) = −1.
        let xi1 = unit(6, 0);
        assert_eq!(maurer_cartan_d1(&xi1, &unit(6, 1), &unit(6, 2)), -1.0);
        assert_eq!(maurer_cartan_d1(&xi1, &unit(6, 2), &unit(6, 1)), 1.0);
        assert_eq!(maurer_cartan_d1(&xi1, &unit(6, 4), &unit(6, 5)), 0.0);
        let xi1p = unit(6, 3);
        assert_eq!(maurer_cartan_d1(&xi1p, &unit(6, 4), &unit(6, 5)), -1.0);
    }

    #[test]
    fn acs_squares_to_minus_one_exactly_at_b0() {
        let j = S3S3MetricParams::new(1.0, 0.0).acs();
        assert_eq!(&j * &j, -DMatrix::<f64>::identity(6, 6));
        // E₁ ↦ −E'₁, E'₁ ↦ E₁.
        assert_eq!(j.column(0).iter().copied().collect::<Vec<_>>(), {
            let mut v = vec![0.0; 6];
            v[3] = -1.0;
            v
        });
        assert_eq!(j[(0, 3)], 1.0);
    }

    #[test]
    fn acs_is_compatible_with_metric() {
        for b in [-0.7, -0.5, 0.0, 0.3] {
            let p = S3S3MetricParams::new(1.0, b);
            let (g, j) = (p.gram(), p.acs());
            let err = (j.transpose() * &g * &j - &g).abs().max();
            assert!(err < 1e-14, "b = {b}: {err}");
            let jj = (&j * &j + DMatrix::<f64>::identity(6, 6)).abs().max();
            assert!(jj < 1e-14);
            let w = p.omega_matrix();
            assert!((&w + w.transpose()).abs().max() < 1e-15);
        }
    }

    #[test]
    fn positive_definiteness() {
        assert!(S3S3MetricParams::new(1.0, 0.5).is_positive_definite());
        assert!(s3s3_background(S3S3MetricParams::new(1.0, 1.0)).is_err());
        assert!(s3s3_background(S3S3MetricParams::new(1.0, -1.2)).is_err());
        assert!(s3s3_background(S3S3MetricParams::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn search_rejects_bad_intervals() {
        assert!(find_nk_metric(0.2, 0.2, 1e-8).is_err());
        assert!(find_nk_metric(0.3, -0.2, 1e-8).is_err());
        assert!(find_nk_metric(-1.0, 0.5, 1e-8).is_err());
    }

    #[test]
    fn table_lists_brackets() {
        let t = structure_constant_table();
        assert_eq!(t.rows.len(), 15);
        let r = t.rows.iter().find(|r| r.i == 1 && r.j == 2).unwrap();
        assert_eq!(r.bracket, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let mixed = t.rows.iter().find(|r| r.i == 0 && r.j == 3).unwrap();
        assert_eq!(mixed.bracket, [0.0; 6]);
    }
}
