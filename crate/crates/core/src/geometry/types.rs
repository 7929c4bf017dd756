use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::geometry::coframe::UnitaryCoframe;
use crate::geometry::form::{determinant, FormValue};
use crate::linalg::combinations;

/// Norms of the `(p,q)` components of a form at a point, keyed `"p,q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeSpectrum {
    pub degree: usize,
    pub norms: BTreeMap<String, f64>,
    pub point: Vec<f64>,
}

impl TypeSpectrum {
    pub fn norm(&self, p: usize, q: usize) -> f64 {
        self.norms.get(&format!("{p},{q}")).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.norms.values().map(|n| n * n).sum::<f64>().sqrt()
    }

    /// Norm of everything outside `(k,0) + (0,k)`.
    pub fn mixed(&self) -> f64 {
        let k = self.degree;
        (1..k)
            .map(|p| self.norm(p, k - p).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `mixed / total`, or 0 for the zero form.
    pub fn mixed_fraction(&self) -> f64 {
        let t = self.total();
        if t == 0.0 {
            0.0
        } else {
            self.mixed() / t
        }
    }

    /// One JSON-lines record.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("spectrum serialises")
    }
}

/// Splits a fully evaluated form into `(p,q)` parts relative to `coframe`.
///
/// The component on `(U_A, Ū_B)` is `Σ_I α_I det(c[:, I])` with `c` the
/// coordinates of the complex frame in the form's real frame; because the
/// complex frame is unitary the squared norms add up to `‖α‖²`.
pub fn type_decompose(value: &FormValue, coframe: &UnitaryCoframe) -> Result<TypeSpectrum> {
    let k = value.degree;
    if k > 4 {
        return Err(precondition(format!(
            "type decomposition of degree {k} > 4"
        )));
    }
    if value.frame.len() != coframe.real_frame.len() {
        return Err(precondition("form frame and coframe have different ranks"));
    }
    let n = coframe.complex_dim();
    let coords: Vec<Vec<Complex64>> = coframe
        .complex_frame()
        .iter()
        .map(|w| coframe.coordinates(w, &value.frame))
        .collect();
    let subsets = combinations(2 * n, k);
    let mut norms: BTreeMap<String, f64> = BTreeMap::new();
    for p in 0..=k.min(n) {
        if k - p <= n {
            norms.insert(format!("{},{}", p, k - p), 0.0);
        }
    }
    let real_subsets = combinations(value.frame.len(), k);
    for sel in &subsets {
        let p = sel.iter().filter(|&&i| i < n).count();
        let mut z = Complex64::new(0.0, 0.0);
        for (idx, &alpha) in real_subsets.iter().zip(&value.components) {
            if alpha == 0.0 {
                continue;
            }
            let sub: Vec<Vec<Complex64>> = sel
                .iter()
                .map(|&r| idx.iter().map(|&c| coords[r][c]).collect())
                .collect();
            z += determinant(sub) * alpha;
        }
        *norms.get_mut(&format!("{},{}", p, k - p)).expect("key") += z.norm_sqr();
    }
    for v in norms.values_mut() {
        *v = v.sqrt();
    }
    Ok(TypeSpectrum {
        degree: k,
        norms,
        point: value.point.clone(),
    })
}
