use std::f64::consts::{PI, TAU};

use nkcurves::curves::{cr_residual, curve_volume, great_sphere_curve, subtorus_family};
use nkcurves::moduli::{curve_hausdorff, g2_orbit_family, stokes_check, subtorus_path, FamilyPath};
use nkcurves::nk::{s6_background, BackgroundSpec, TrigPoly};
use nkcurves::{random_g2, G2Path, ImOctonion};
use proptest::prelude::{prop_assert, proptest, ProptestConfig};

fn torus(field: &str) -> nkcurves::nk::NKBackground {
    BackgroundSpec::Torus {
        field: TrigPoly::parse(field).unwrap(),
    }
    .build()
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn volume_and_residual_are_g2_invariant(seed in 0u64..10_000) {
        let bg = s6_background();
        let c = great_sphere_curve(&[1, 2, 3].map(ImOctonion::unit), 2).unwrap();
        let g = c.apply_g2(&random_g2(seed));
        let (v0, v1) = (curve_volume(&bg, &c).unwrap(), curve_volume(&bg, &g).unwrap());
        prop_assert!((v0 - v1).abs() < 1e-12);
        prop_assert!(cr_residual(&bg, &g).unwrap().l2 < 1e-12);
    }

    #[test]
    fn reversal_negates_volume_and_conjugation_restores_holomorphy(seed in 0u64..10_000) {
        let bg = s6_background();
        let c = great_sphere_curve(&[1, 2, 3].map(ImOctonion::unit), 2)
            .unwrap()
            .apply_g2(&random_g2(seed));
        let r = c.reversed();
        prop_assert!((curve_volume(&bg, &r).unwrap() + curve_volume(&bg, &c).unwrap()).abs() < 1e-12);
        prop_assert!(cr_residual(&bg.conjugate(), &r).unwrap().l2 < 1e-12);
    }

    #[test]
    fn curve_hausdorff_is_symmetric(a in 0u64..1000, b in 0u64..1000) {
        let bg = s6_background();
        let c = great_sphere_curve(&[1, 2, 3].map(ImOctonion::unit), 1).unwrap();
        let (x, y) = (c.apply_g2(&random_g2(a)), c.apply_g2(&random_g2(b)));
        let d = curve_hausdorff(&bg, &x, &y).unwrap();
        prop_assert!(d >= 0.0 && d <= 2.0 + 1e-12);
        prop_assert!(d == curve_hausdorff(&bg, &y, &x).unwrap());
    }

    #[test]
    fn kahler_torus_family_has_no_chain_integral(
        s in proptest::array::uniform4(-0.5f64..0.5),
    ) {
        let bg = torus("0");
        let fam = subtorus_path(&bg, s, 4, 6, 1e-8, 10.0).unwrap();
        let r = stokes_check(&bg, &fam, 1e-5).unwrap();
        prop_assert!(r.lhs.abs() < 1e-9 && r.rhs.abs() < 1e-9);
    }

    #[test]
    fn subtorus_volume_matches_closed_form(t in 0.0f64..1.0, k in 1i32..3) {
        // f = sin(k x₅) is constant on each subtorus, so Vol = (2π)² e^f.
        let bg = torus(&format!("sin({k}x5)"));
        let c = subtorus_family(&bg, t, [0.0, 0.0, 0.25, 0.0], 6).unwrap();
        let expected = TAU * TAU * (f64::from(k) * TAU * 0.25 * t).sin().exp();
        prop_assert!((curve_volume(&bg, &c).unwrap() - expected).abs() < 1e-10 * expected);
    }
}

#[test]
fn family_path_round_trips_through_json() {
    let bg = s6_background();
    let c = great_sphere_curve(&[1, 2, 3].map(ImOctonion::unit), 1).unwrap();
    let fam = g2_orbit_family(&bg, &c, &G2Path::random(4), 3, 1e-8, 3.0).unwrap();
    let text = serde_json::to_string(&fam).unwrap();
    let back: FamilyPath = serde_json::from_str(&text).unwrap();
    assert_eq!(back.times, fam.times);
    assert_eq!(back.curves[0].faces, fam.curves[0].faces);
    back.check().unwrap();
}

#[test]
fn great_sphere_volume_converges_to_four_pi() {
    let bg = s6_background();
    let triple = [1, 2, 3].map(ImOctonion::unit);
    let err = |level| {
        let c = great_sphere_curve(&triple, level).unwrap();
        (curve_volume(&bg, &c).unwrap() - 4.0 * PI).abs()
    };
    let ratio = err(3) / err(4);
    assert!(ratio > 3.8 && ratio < 4.2, "ratio {ratio}");
}
