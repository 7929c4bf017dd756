use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::coframe::{build_unitary_coframe, UnitaryCoframe};
use crate::geometry::form::FormField;
use crate::geometry::manifold::{Manifold, PointStructure, SharedGeometry};
use crate::nk::geometry::Conjugate;
use crate::nk::s3s3::{s3s3_background, S3S3MetricParams};
use crate::nk::s6::s6_background;
use crate::nk::torus::torus_testbed;
use crate::nk::trig::TrigPoly;

/// Serializable description of a background, as used in configs and meshes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum BackgroundSpec {
    S6,
    S3s3 {
        #[serde(default = "one")]
        a: f64,
        b: f64,
        #[serde(default)]
        swap_factors: bool,
    },
    Torus {
        field: TrigPoly,
    },
}

fn one() -> f64 {
    1.0
}

impl BackgroundSpec {
    pub fn name(&self) -> &'static str {
        match self {
            BackgroundSpec::S6 => "s6",
            BackgroundSpec::S3s3 { .. } => "s3s3",
            BackgroundSpec::Torus { .. } => "torus",
        }
    }

    pub fn build(&self) -> Result<NKBackground> {
        match self {
            BackgroundSpec::S6 => Ok(s6_background()),
            BackgroundSpec::S3s3 { a, b, swap_factors } => s3s3_background(S3S3MetricParams {
                a: *a,
                b: *b,
                swap_factors: *swap_factors,
            }),
            BackgroundSpec::Torus { field } => Ok(torus_testbed(field.clone())),
        }
    }
}

/// How `dω` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMethod {
    /// Richardson-extrapolated finite differences of the extended form.
    FiniteDifference,
    /// Exact structure equations of a left-invariant coframe.
    MaurerCartan,
    /// A closed-form expression.
    ClosedForm,
}

/// A six-dimensional almost Hermitian background with its fundamental forms.
#[derive(Clone)]
pub struct NKBackground {
    pub spec: BackgroundSpec,
    pub geometry: SharedGeometry,
    /// `ω = g(·, J·)`.
    pub omega: FormField,
    pub domega: FormField,
    pub domega_method: DerivativeMethod,
    /// `(ReΩ, ImΩ)` where defined.
    pub omega_3_0: Option<(FormField, FormField)>,
    /// Golden value of `λ` in `dω = 3λ ReΩ` under this crate's normalisations.
    pub structure_constant: Option<f64>,
}

impl std::fmt::Debug for NKBackground {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NKBackground")
            .field("spec", &self.spec)
            .field("domega_method", &self.domega_method)
            .field("structure_constant", &self.structure_constant)
            .finish_non_exhaustive()
    }
}

/// JSON manifest entry describing a background.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackgroundDescriptor {
    pub name: String,
    pub dimension: usize,
    pub spec: BackgroundSpec,
    pub domega_method: DerivativeMethod,
    pub has_omega_3_0: bool,
    pub structure_constant: Option<f64>,
    pub conventions: BTreeMap<String, String>,
}

impl NKBackground {
    pub fn name(&self) -> &'static str {
        self.spec.name()
    }

    pub fn dimension(&self) -> usize {
        self.geometry.dim()
    }

    pub fn manifold(&self) -> Arc<dyn Manifold> {
        self.geometry.clone()
    }

    pub fn structure_at(&self, p: &[f64]) -> PointStructure {
        self.geometry.structure_at(p)
    }

    pub fn coframe_at(&self, p: &[f64]) -> Result<UnitaryCoframe> {
        build_unitary_coframe(&self.geometry.structure_at(p))
    }

    pub fn metric(&self, p: &[f64], x: &[f64], y: &[f64]) -> f64 {
        self.geometry.metric(p, x, y)
    }

    pub fn acs(&self, p: &[f64], v: &[f64]) -> Vec<f64> {
        self.geometry.acs(p, v)
    }

    /// Deterministic sample of points on the background.
    pub fn sample_points(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = self.geometry.ambient_dim();
        (0..n)
            .map(|_| match self.spec {
                BackgroundSpec::S6 => {
                    let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                    self.geometry.retract(&v)
                }
                BackgroundSpec::S3s3 { .. } => vec![0.0; dim],
                BackgroundSpec::Torus { .. } => (0..dim)
                    .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                    .collect(),
            })
            .collect()
    }

    /// A random tangent vector at `p` with standard normal ambient entries
    /// projected to `T_pM`.
    pub fn random_tangent(&self, p: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
        let v: Vec<f64> = (0..p.len()).map(|_| rng.sample(StandardNormal)).collect();
        self.geometry.project_tangent(p, &v)
    }

    /// The same background with `J ↦ −J`; the forms change accordingly.
    pub fn conjugate(&self) -> NKBackground {
        NKBackground {
            spec: self.spec.clone(),
            geometry: Arc::new(Conjugate(self.geometry.clone())),
            omega: self.omega.scaled(-1.0),
            domega: self.domega.scaled(-1.0),
            domega_method: self.domega_method,
            omega_3_0: self
                .omega_3_0
                .as_ref()
                .map(|(re, im)| (re.clone(), im.scaled(-1.0))),
            structure_constant: self.structure_constant.map(|l| -l),
        }
    }

    /// Replaces `ImΩ`, keeping everything else.
    pub fn with_im_omega(&self, im: FormField) -> NKBackground {
        let mut out = self.clone();
        if let Some((re, _)) = &self.omega_3_0 {
            out.omega_3_0 = Some((re.clone(), im));
        }
        out
    }

    pub fn descriptor(&self) -> BackgroundDescriptor {
        let mut conventions = BTreeMap::new();
        conventions.insert("hermitian_form".into(), "omega(x,y) = g(x, J y)".into());
        conventions.insert(
            "wedge".into(),
            "determinant convention, (dx^dy)(u,v) = u_x v_y - u_y v_x".into(),
        );
        conventions.insert("type_norm".into(), "unitary-coframe Frobenius norm".into());
        match &self.spec {
            BackgroundSpec::S6 => {
                conventions.insert(
                    "acs".into(),
                    "J_p v = p x v (octonion cross product)".into(),
                );
                conventions.insert(
                    "omega_3_0".into(),
                    "ReOmega = <x y, z> on tangent vectors, ImOmega = ReOmega(J., ., .)".into(),
                );
                conventions.insert(
                    "octonions".into(),
                    "Cayley-Dickson doubling of quaternions, e5=e1e4, e6=e2e4, e7=e3e4".into(),
                );
            }
            BackgroundSpec::S3s3 { .. } => {
                conventions.insert(
                    "structure_equations".into(),
                    "d xi_i = - xi_j ^ xi_k (cyclic) on each factor".into(),
                );
                conventions.insert(
                    "metric".into(),
                    "a sum(xi_i^2 + xi_i'^2) + b sum(xi_i xi_i' + xi_i' xi_i)".into(),
                );
                conventions.insert(
                    "acs".into(),
                    "g-compatible quarter turn in each plane (E_i, E_i'), E_i -> -E_i' at b = 0"
                        .into(),
                );
            }
            BackgroundSpec::Torus { .. } => {
                conventions.insert(
                    "acs".into(),
                    "J d/dx1 = -d/dx2, J d/dx2 = d/dx1 on pairs (1,2), (3,4), (5,6)".into(),
                );
                conventions.insert("metric".into(), "exp(f) times the flat metric".into());
            }
        }
        BackgroundDescriptor {
            name: self.name().into(),
            dimension: self.dimension(),
            spec: self.spec.clone(),
            domega_method: self.domega_method,
            has_omega_3_0: self.omega_3_0.is_some(),
            structure_constant: self.structure_constant,
            conventions,
        }
    }
}
