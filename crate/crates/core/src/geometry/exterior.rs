use std::sync::Arc;

use crate::error::{precondition, Result};
use crate::geometry::form::FormField;
use crate::geometry::manifold::Manifold;
use crate::linalg::axpy;

/// Default finite-difference step as a fraction of the smoothness radius.
pub const DEFAULT_RELATIVE_STEP: f64 = 1e-3;

/// The form extended off the manifold by pulling back along the retraction.
fn extended(field: &FormField, manifold: &dyn Manifold, x: &[f64], vectors: &[&[f64]]) -> f64 {
    let base = manifold.retract(x);
    let pushed: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| manifold.retract_differential(x, v))
        .collect();
    field.eval_vecs(&base, &pushed)
}

/// `dα(v₀,…,v_k)` at `p` from the coordinate formula for constant ambient
/// vector fields, `Σ (−1)^i ∂_{v_i} α̃(v₀,…,v̂_i,…,v_k)`.
///
/// Each directional derivative is a central difference at `h` and `h/2`
/// combined by Richardson extrapolation.
pub fn exterior_derivative(
    field: &FormField,
    manifold: &dyn Manifold,
    p: &[f64],
    vectors: &[&[f64]],
    step: f64,
) -> Result<f64> {
    if !(step > 0.0 && step < field.radius()) {
        return Err(precondition(format!(
            "step {step} outside (0, {})",
            field.radius()
        )));
    }
    if vectors.len() != field.degree() + 1 {
        return Err(precondition(format!(
            "d of a {}-form takes {} vectors, got {}",
            field.degree(),
            field.degree() + 1,
            vectors.len()
        )));
    }
    Ok(exterior_derivative_unchecked(
        field, manifold, p, vectors, step,
    ))
}

fn exterior_derivative_unchecked(
    field: &FormField,
    manifold: &dyn Manifold,
    p: &[f64],
    vectors: &[&[f64]],
    step: f64,
) -> f64 {
    let mut total = 0.0;
    for (i, v) in vectors.iter().enumerate() {
        let rest: Vec<&[f64]> = vectors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, w)| *w)
            .collect();
        let central = |h: f64| {
            let plus = extended(field, manifold, &axpy(p, h, v), &rest);
            let minus = extended(field, manifold, &axpy(p, -h, v), &rest);
            (plus - minus) / (2.0 * h)
        };
        let derivative = (4.0 * central(step / 2.0) - central(step)) / 3.0;
        if i % 2 == 0 {
            total += derivative;
        } else {
            total -= derivative;
        }
    }
    total
}

/// `dα` as a form field, evaluated by [`exterior_derivative`].
///
/// `step` defaults to [`DEFAULT_RELATIVE_STEP`] times the radius.
pub fn derivative_field(
    field: &FormField,
    manifold: Arc<dyn Manifold>,
    step: Option<f64>,
) -> Result<FormField> {
    let h = step.unwrap_or(DEFAULT_RELATIVE_STEP * field.radius());
    if !(h > 0.0 && h < field.radius()) {
        return Err(precondition(format!(
            "step {h} outside (0, {})",
            field.radius()
        )));
    }
    if field.degree() >= 6 {
        return Err(precondition("d of a top-degree form"));
    }
    let inner = field.clone();
    FormField::new(field.degree() + 1, field.radius(), move |p, vs| {
        exterior_derivative_unchecked(&inner, manifold.as_ref(), p, vs, h)
    })
}
