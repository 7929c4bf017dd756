use serde::{Deserialize, Serialize};

use crate::curves::integrals::cr_residual;
use crate::curves::mesh::CurveMesh;
use crate::curves::seeds::subtorus_family;
use crate::error::{precondition, Result};
use crate::moduli::hausdorff::curve_hausdorff;
use crate::nk::background::{BackgroundSpec, NKBackground};
use crate::octonion::G2Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Every curve is given in closed form.
    ExactFamily,
    /// Curves produced by drive plus Gauss–Newton projection.
    Continued,
}

/// A discretised path `γ: [0, 1] → moduli`, one mesh per time, all with the
/// same combinatorics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyPath {
    pub background: BackgroundSpec,
    pub provenance: Provenance,
    pub times: Vec<f64>,
    pub curves: Vec<CurveMesh>,
    /// CR residual `l2` of each curve.
    pub residuals: Vec<f64>,
    /// `d_H(curve_{k−1}, curve_k)`, zero for the first curve.
    pub hausdorff_steps: Vec<f64>,
    pub residual_budget: f64,
    pub step_bound: f64,
}

impl FamilyPath {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Checks the path invariants: increasing times in `[0, 1]`, shared
    /// combinatorics, residuals within budget, steps within bound.
    pub fn check(&self) -> Result<()> {
        if self.times.len() != self.curves.len() || self.curves.is_empty() {
            return Err(precondition("one curve per time required"));
        }
        if self.times.windows(2).any(|w| !(w[0] < w[1]))
            || self.times[0] < 0.0
            || *self.times.last().expect("nonempty") > 1.0
        {
            return Err(precondition("times must increase within [0, 1]"));
        }
        if self
            .curves
            .iter()
            .any(|c| !c.same_combinatorics(&self.curves[0]))
        {
            return Err(precondition("curves do not share mesh combinatorics"));
        }
        if let Some(r) = self
            .residuals
            .iter()
            .find(|r| !(**r <= self.residual_budget))
        {
            return Err(precondition(format!("residual {r:e} exceeds the budget")));
        }
        if let Some(d) = self
            .hausdorff_steps
            .iter()
            .find(|d| !(**d <= self.step_bound))
        {
            return Err(precondition(format!(
                "Hausdorff step {d:e} exceeds the bound"
            )));
        }
        Ok(())
    }
}

/// Assembles a path from closed-form curves, recording residuals and steps,
/// and checks the path invariants.
pub fn exact_family(
    bg: &NKBackground,
    times: &[f64],
    curve_at: impl Fn(f64) -> Result<CurveMesh>,
    residual_budget: f64,
    step_bound: f64,
) -> Result<FamilyPath> {
    let curves = times
        .iter()
        .map(|&t| curve_at(t))
        .collect::<Result<Vec<_>>>()?;
    let residuals = curves
        .iter()
        .map(|c| cr_residual(bg, c).map(|r| r.l2))
        .collect::<Result<Vec<_>>>()?;
    let mut hausdorff_steps = vec![0.0];
    for w in curves.windows(2) {
        hausdorff_steps.push(curve_hausdorff(bg, &w[0], &w[1])?);
    }
    let path = FamilyPath {
        background: bg.spec.clone(),
        provenance: Provenance::ExactFamily,
        times: times.to_vec(),
        curves,
        residuals,
        hausdorff_steps,
        residual_budget,
        step_bound,
    };
    path.check()?;
    Ok(path)
}

/// `steps + 1` uniform times in `[0, 1]`.
pub fn uniform_times(steps: usize) -> Vec<f64> {
    (0..=steps).map(|k| k as f64 / steps as f64).collect()
}

/// The orbit `t ↦ M(t)·curve` of a curve under a path in `G₂`.
pub fn g2_orbit_family(
    bg: &NKBackground,
    start: &CurveMesh,
    path: &G2Path,
    steps: usize,
    residual_budget: f64,
    step_bound: f64,
) -> Result<FamilyPath> {
    exact_family(
        bg,
        &uniform_times(steps),
        |t| Ok(start.apply_g2(&path.at(t)?)),
        residual_budget,
        step_bound,
    )
}

/// Translated subtori `t ↦ T² + 2πt·shift` in the testbed.
pub fn subtorus_path(
    bg: &NKBackground,
    shift: [f64; 4],
    resolution: usize,
    steps: usize,
    residual_budget: f64,
    step_bound: f64,
) -> Result<FamilyPath> {
    exact_family(
        bg,
        &uniform_times(steps),
        |t| subtorus_family(bg, t, shift, resolution),
        residual_budget,
        step_bound,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::seeds::great_sphere_curve;
    use crate::nk::s6::s6_background;
    use crate::octonion::standard_triple;
    use crate::ImOctonion;

    #[test]
    fn g2_orbit_satisfies_invariants() {
        let bg = s6_background();
        let triple = [1, 2, 3].map(ImOctonion::unit);
        let c = great_sphere_curve(&triple, 1).unwrap();
        let path = G2Path::random(3);
        let fam = g2_orbit_family(&bg, &c, &path, 8, 1e-8, 1.0).unwrap();
        assert_eq!(fam.len(), 9);
        assert_eq!(fam.provenance, Provenance::ExactFamily);
        fam.check().unwrap();
        assert!(fam.residuals.iter().all(|r| *r < 1e-12));
    }

    #[test]
    fn step_bound_enforced() {
        let bg = s6_background();
        let triple = [1, 2, 3].map(ImOctonion::unit);
        let c = great_sphere_curve(&triple, 1).unwrap();
        assert!(g2_orbit_family(&bg, &c, &G2Path::random(3), 2, 1e-8, 1e-3).is_err());
    }

    #[test]
    fn non_pseudoholomorphic_member_rejected() {
        let bg = s6_background();
        let c = crate::curves::seeds::sphere_in_plane(
            standard_triple::<f64>().map(|v| v.coeffs.to_vec()),
            1,
        )
        .unwrap();
        let r = exact_family(&bg, &uniform_times(1), |_| Ok(c.clone()), 1e-6, 1.0);
        assert!(r.is_err());
    }

    #[test]
    fn check_rejects_unordered_times() {
        let bg = s6_background();
        let triple = [1, 2, 3].map(ImOctonion::unit);
        let c = great_sphere_curve(&triple, 1).unwrap();
        let mut fam = g2_orbit_family(&bg, &c, &G2Path::random(1), 2, 1e-8, 3.0).unwrap();
        fam.times.swap(0, 1);
        assert!(fam.check().is_err());
    }

    #[test]
    fn subtorus_path_volume_varies() {
        let spec: BackgroundSpec =
            serde_json::from_str(r#"{"name":"torus","field":"sin(x5)"}"#).unwrap();
        let bg = spec.build().unwrap();
        let fam = subtorus_path(&bg, [0.0, 0.0, 0.25, 0.0], 4, 4, 1e-8, 10.0).unwrap();
        fam.check().unwrap();
        assert_eq!(fam.curves[0].genus, 1);
    }
}
