use std::sync::Arc;

use crate::geometry::exterior::derivative_field;
use crate::geometry::form::FormField;
use crate::geometry::manifold::Manifold;
use crate::linalg::dot;
use crate::nk::background::{BackgroundSpec, DerivativeMethod, NKBackground};
use crate::nk::geometry::{cross7, phi7, SixSphere};

/// `ω_p(x, y) = ⟨x, p × y⟩`.
pub fn s6_omega() -> FormField {
    FormField::new(2, 1.0, |p, v| dot(v[0], &cross7(p, v[1]))).expect("valid form")
}

/// `ReΩ_p(x, y, z) = ⟨xy, z⟩` on the tangent projections.
pub fn s6_re_omega() -> FormField {
    FormField::new(3, 1.0, |p, v| {
        let s = SixSphere;
        let x = s.project_tangent(p, v[0]);
        let y = s.project_tangent(p, v[1]);
        let z = s.project_tangent(p, v[2]);
        phi7(&x, &y, &z)
    })
    .expect("valid form")
}

/// `ImΩ = ReΩ(J·, ·, ·)`.
pub fn s6_im_omega() -> FormField {
    im_omega_with_sign(1.0)
}

/// `ImΩ` with the opposite sign, `−ReΩ(J·, ·, ·)`; fails the second structure
/// equation and serves as a negative control.
pub fn s6_im_omega_opposite() -> FormField {
    im_omega_with_sign(-1.0)
}

fn im_omega_with_sign(sign: f64) -> FormField {
    FormField::new(3, 1.0, move |p, v| {
        let s = SixSphere;
        let x = cross7(p, v[0]);
        let y = s.project_tangent(p, v[1]);
        let z = s.project_tangent(p, v[2]);
        sign * phi7(&x, &y, &z)
    })
    .expect("valid form")
}

/// The round six-sphere with its octonionic almost complex structure.
/// Under this crate's conventions `dω = −3 ReΩ`, so `λ = −1`.
pub fn s6_background() -> NKBackground {
    let omega = s6_omega();
    let domega = derivative_field(&omega, Arc::new(SixSphere), None).expect("valid step");
    NKBackground {
        spec: BackgroundSpec::S6,
        geometry: Arc::new(SixSphere),
        omega,
        domega,
        domega_method: DerivativeMethod::FiniteDifference,
        omega_3_0: Some((s6_re_omega(), s6_im_omega())),
        structure_constant: Some(-1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;

    #[test]
    fn j_at_e1() {
        let bg = s6_background();
        let p = unit(7, 0);
        let je2 = bg.acs(&p, &unit(7, 1));
        assert_eq!(je2, unit(7, 2));
    }

    #[test]
    fn re_omega_is_ambient_associative_form() {
        let f = s6_re_omega();
        let p = unit(7, 0);
        // e2, e4 and e6 are tangent at e1 and e2·e4 = e6.
        let v = [unit(7, 1), unit(7, 3), unit(7, 5)];
        assert_eq!(f.eval_vecs(&p, &v), 1.0);
        let w = [unit(7, 1), unit(7, 3), unit(7, 4)];
        assert_eq!(f.eval_vecs(&p, &w), 0.0);
    }
}
