//! Pointwise verification of the structure: almost Hermitian identities,
//! type of `dω` and the structure equations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::types::{type_decompose, TypeSpectrum};
use crate::linalg::max_abs;
use crate::nk::background::NKBackground;

/// Largest violations of the almost Hermitian identities over a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureInvariants {
    /// `max |J²v + v| / |v|`
    pub j_squared: f64,
    /// `max |g(Jx, Jy) − g(x, y)| / (|x||y|)`
    pub compatibility: f64,
    /// `max |ω(x, y) − g(x, Jy)| / (|x||y|)`
    pub omega_consistency: f64,
}

impl StructureInvariants {
    pub fn max(&self) -> f64 {
        self.j_squared
            .max(self.compatibility)
            .max(self.omega_consistency)
    }
}

/// Checks the almost Hermitian identities on random tangent vectors.
pub fn structure_invariants(
    bg: &NKBackground,
    points: &[Vec<f64>],
    seed: u64,
) -> StructureInvariants {
    let per: Vec<[f64; 3]> = points
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            // Offset from the stream used by `sample_points(seed)`, which would
            // otherwise draw a vector parallel to `p` at `k = 0`.
            let stream = (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA076_1D64_78BD_642F ^ stream);
            let x = bg.random_tangent(p, &mut rng);
            let y = bg.random_tangent(p, &mut rng);
            let nx = bg.metric(p, &x, &x).sqrt();
            let ny = bg.metric(p, &y, &y).sqrt();
            let jx = bg.acs(p, &x);
            let jy = bg.acs(p, &y);
            let jjx = bg.acs(p, &jx);
            let sq: Vec<f64> = jjx.iter().zip(&x).map(|(a, b)| a + b).collect();
            let j_squared = bg.metric(p, &sq, &sq).sqrt() / nx;
            let compatibility = (bg.metric(p, &jx, &jy) - bg.metric(p, &x, &y)).abs() / (nx * ny);
            let omega = bg.omega.eval(p, &[&x, &y]);
            let omega_consistency = (omega - bg.metric(p, &x, &jy)).abs() / (nx * ny);
            [j_squared, compatibility, omega_consistency]
        })
        .collect();
    let col = |i: usize| max_abs(&per.iter().map(|r| r[i]).collect::<Vec<_>>());
    StructureInvariants {
        j_squared: col(0),
        compatibility: col(1),
        omega_consistency: col(2),
    }
}

/// Type spectrum of `dω` at one point.
pub fn type_residual_at(bg: &NKBackground, p: &[f64]) -> Result<TypeSpectrum> {
    let coframe = bg.coframe_at(p)?;
    let value = bg.domega.value_on_frame(p, &coframe.real_frame);
    type_decompose(&value, &coframe)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeResidualReport {
    /// Largest `(2,1)+(1,2)` fraction of `dω`.
    pub max_fraction: f64,
    pub spectra: Vec<TypeSpectrum>,
}

/// `‖(dω)^{(2,1)+(1,2)}‖ / ‖dω‖` at each sample point.
pub fn type_residual(bg: &NKBackground, points: &[Vec<f64>]) -> Result<TypeResidualReport> {
    let spectra = points
        .par_iter()
        .map(|p| type_residual_at(bg, p))
        .collect::<Result<Vec<_>>>()?;
    let max_fraction = spectra
        .iter()
        .map(|s| s.mixed_fraction())
        .fold(0.0, f64::max);
    Ok(TypeResidualReport {
        max_fraction,
        spectra,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub lambda_mean: f64,
    pub lambda_std: f64,
    /// Largest `‖dω − 3λ ReΩ‖ / ‖dω‖` with `λ = lambda_mean`.
    pub max_residual: f64,
    pub per_point: Vec<f64>,
}

/// Fits `dω = 3λ ReΩ` pointwise, `λ(p) = ⟨dω, 3ReΩ⟩ / ‖3ReΩ‖²`.
///
/// Without `Ω` the only meaningful answer is the Kähler one: `λ = 0` when
/// `dω` vanishes at every sample, otherwise `NotApplicable`.
pub fn lambda_estimate(bg: &NKBackground, points: &[Vec<f64>]) -> Result<LambdaEstimate> {
    if points.is_empty() {
        return Err(crate::error::precondition("no sample points"));
    }
    let Some((re, _)) = &bg.omega_3_0 else {
        for p in points {
            let coframe = bg.coframe_at(p)?;
            if bg.domega.value_on_frame(p, &coframe.real_frame).norm() > 1e-12 {
                return Err(Error::NotApplicable(format!(
                    "{} has no (3,0)-form and dω ≠ 0",
                    bg.name()
                )));
            }
        }
        return Ok(LambdaEstimate {
            lambda_mean: 0.0,
            lambda_std: 0.0,
            max_residual: 0.0,
            per_point: vec![0.0; points.len()],
        });
    };
    let pairs = points
        .par_iter()
        .map(|p| {
            let coframe = bg.coframe_at(p)?;
            let d = bg.domega.value_on_frame(p, &coframe.real_frame);
            let r = re.value_on_frame(p, &coframe.real_frame);
            let rr = r.inner(&r);
            if rr == 0.0 {
                return Err(Error::DegenerateStructure(format!("ReΩ vanishes at {p:?}")));
            }
            Ok((d.inner(&r) / (3.0 * rr), d, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pairs.len() as f64;
    let per_point: Vec<f64> = pairs.iter().map(|(l, _, _)| *l).collect();
    let mean = per_point.iter().sum::<f64>() / n;
    let var = per_point.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n;
    let max_residual = pairs
        .iter()
        .map(|(_, d, r)| d.add_scaled(-3.0 * mean, r).norm() / d.norm())
        .fold(0.0, f64::max);
    Ok(LambdaEstimate {
        lambda_mean: mean,
        lambda_std: var.sqrt(),
        max_residual,
        per_point,
    })
}

/// `max_p ‖d ImΩ + 2λ ω∧ω‖ / ‖ω∧ω‖`, with `d ImΩ` by finite differences.
pub fn second_structure_equation_residual(
    bg: &NKBackground,
    points: &[Vec<f64>],
    lambda: f64,
) -> Result<f64> {
    let Some((_, im)) = &bg.omega_3_0 else {
        return Err(Error::NotApplicable(format!(
            "{} has no (3,0)-form, d ImΩ is undefined",
            bg.name()
        )));
    };
    let d_im = crate::geometry::exterior::derivative_field(im, bg.manifold(), None)?;
    let omega2 = bg.omega.wedge(&bg.omega)?;
    let residuals = points
        .par_iter()
        .map(|p| {
            let coframe = bg.coframe_at(p)?;
            let a = d_im.value_on_frame(p, &coframe.real_frame);
            let b = omega2.value_on_frame(p, &coframe.real_frame);
            Ok(a.add_scaled(2.0 * lambda, &b).norm() / b.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}
