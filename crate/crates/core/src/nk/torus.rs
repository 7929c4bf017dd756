use std::sync::Arc;

use crate::geometry::form::FormField;
use crate::nk::background::{BackgroundSpec, DerivativeMethod, NKBackground};
use crate::nk::geometry::{torus_omega0, ConformalTorus};
use crate::nk::trig::TrigPoly;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Flat `R⁶/(2πZ)⁶` with constant `J`, metric `e^f δ`, `ω_f = e^f ω₀` and
/// `dω_f = e^f df ∧ ω₀` in closed form. There is no `(3,0)`-form.
pub fn torus_testbed(field: TrigPoly) -> NKBackground {
    let radius = field.smoothness_radius();
    let f = field.clone();
    let omega = FormField::new(2, radius, move |p, v| {
        f.eval(p).exp() * torus_omega0(v[0], v[1])
    })
    .expect("valid form");
    let f = field.clone();
    let domega = FormField::new(3, radius, move |p, v| {
        let df = f.gradient(p);
        let (x, y, z) = (v[0], v[1], v[2]);
        f.eval(p).exp()
            * (dot(&df, x) * torus_omega0(y, z) - dot(&df, y) * torus_omega0(x, z)
                + dot(&df, z) * torus_omega0(x, y))
    })
    .expect("valid form");
    NKBackground {
        spec: BackgroundSpec::Torus {
            field: field.clone(),
        },
        geometry: Arc::new(ConformalTorus { field }),
        omega,
        domega,
        domega_method: DerivativeMethod::ClosedForm,
        omega_3_0: None,
        structure_constant: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::exterior::derivative_field;
    use crate::linalg::unit;

    #[test]
    fn closed_form_matches_finite_differences() {
        let field = TrigPoly::parse("sin(x5) + 0.3*cos(2x1)*sin(x4)").unwrap();
        let bg = torus_testbed(field);
        let fd = derivative_field(&bg.omega, bg.manifold(), None).unwrap();
        let p = [0.4, 1.3, -2.0, 0.9, 0.2, 3.0];
        let x = [0.3, -0.1, 0.8, 0.0, 1.0, 0.5];
        let y = [1.0, 0.7, -0.3, 0.4, 0.1, 0.0];
        let z = [-0.2, 0.0, 0.6, 1.1, 0.5, 0.9];
        let exact = bg.domega.eval(&p, &[&x, &y, &z]);
        let approx = fd.eval(&p, &[&x, &y, &z]);
        assert!((exact - approx).abs() < 1e-8, "{exact} vs {approx}");
    }

    #[test]
    fn zero_field_is_closed() {
        let bg = torus_testbed(TrigPoly::zero());
        let v = [unit(6, 0), unit(6, 2), unit(6, 4)];
        assert_eq!(bg.domega.eval_vecs(&[0.5; 6], &v), 0.0);
        assert_eq!(
            bg.omega.eval_vecs(&[0.5; 6], &[unit(6, 0), unit(6, 1)]),
            1.0
        );
    }
}
