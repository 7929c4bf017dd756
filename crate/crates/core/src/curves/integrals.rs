use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::mesh::CurveMesh;
use crate::error::{Error, Result};
use crate::linalg::{norm, solve2};
use crate::nk::background::NKBackground;

/// Faces with a smaller domain area are rejected.
pub const MIN_FACE_AREA: f64 = 1e-14;

/// Affine differential of the parameterisation on one face.
///
/// `(t₁, t₂)` is an orthonormal domain pair, positively oriented for the
/// face's winding; `a = df(t₁)`, `b = df(t₂)`.
#[derive(Clone, Debug)]
pub struct FaceJet {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Retracted centroid of the image triangle.
    pub centroid: Vec<f64>,
    /// Retracted circumcentre of the image triangle.
    pub circumcenter: Vec<f64>,
    pub domain_area: f64,
}

fn cross3(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

pub fn face_jet(bg: &NKBackground, curve: &CurveMesh, face: usize) -> Result<FaceJet> {
    let [i, j, k] = curve.faces[face];
    let v = &curve.vertices;
    jet_from_points(bg, curve, face, [&v[i].point, &v[j].point, &v[k].point])
}

/// [`face_jet`] with the image points of the face's corners supplied.
pub fn jet_from_points(
    bg: &NKBackground,
    curve: &CurveMesh,
    face: usize,
    points: [&[f64]; 3],
) -> Result<FaceJet> {
    let [i, j, k] = curve.faces[face];
    let d1 = curve.domain_edge(i, j);
    let d2 = curve.domain_edge(i, k);
    let n = cross3(&d1, &d2);
    let twice_area = norm(&n);
    if !(0.5 * twice_area >= MIN_FACE_AREA) {
        return Err(Error::MeshQuality(format!(
            "face {face} has domain area {:e}",
            0.5 * twice_area
        )));
    }
    let len1 = norm(&d1);
    let t1: Vec<f64> = d1.iter().map(|x| x / len1).collect();
    let nn = [n[0] / twice_area, n[1] / twice_area, n[2] / twice_area];
    let t2 = cross3(&nn, &[t1[0], t1[1], t1[2]]);
    let s = d2[0] * t1[0] + d2[1] * t1[1] + d2[2] * t1[2];
    let r = d2[0] * t2[0] + d2[1] * t2[1] + d2[2] * t2[2];

    let geo = &bg.geometry;
    let pa = points[0];
    let e1 = geo.chord(pa, points[1]);
    let e2 = geo.chord(pa, points[2]);
    let a: Vec<f64> = e1.iter().map(|x| x / len1).collect();
    let b: Vec<f64> = e2.iter().zip(&a).map(|(y, x)| (y - s * x) / r).collect();

    let centroid_raw: Vec<f64> = (0..pa.len())
        .map(|m| pa[m] + (e1[m] + e2[m]) / 3.0)
        .collect();
    let uu = e1.iter().map(|x| x * x).sum::<f64>();
    let vv = e2.iter().map(|x| x * x).sum::<f64>();
    let uv = e1.iter().zip(&e2).map(|(x, y)| x * y).sum::<f64>();
    let reach = 2.0 * uu.max(vv).sqrt();
    let circum_raw = match solve2(uu, uv, uv, vv, [0.5 * uu, 0.5 * vv]) {
        Some([al, be]) => {
            let off: Vec<f64> = (0..pa.len()).map(|m| al * e1[m] + be * e2[m]).collect();
            if norm(&off) <= reach {
                Some(
                    pa.iter()
                        .zip(&off)
                        .map(|(p, o)| p + o)
                        .collect::<Vec<f64>>(),
                )
            } else {
                None
            }
        }
        None => None,
    };
    let centroid = geo.retract(&centroid_raw);
    let circumcenter = match circum_raw {
        Some(c) if norm(&c) > 1e-8 => geo.retract(&c),
        _ => centroid.clone(),
    };
    Ok(FaceJet {
        a,
        b,
        centroid,
        circumcenter,
        domain_area: 0.5 * twice_area,
    })
}

/// `(c₁, c₂) = (∂̄f(t₁), ∂̄f(t₂)) = (½(a − Jb), ½(b + Ja))` for the domain
/// complex structure `j = −R` (`R` the positive quarter turn of the
/// winding), with `J` sampled at `q`.
pub fn dbar_vectors(bg: &NKBackground, jet: &FaceJet, q: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let ja = bg.acs(q, &jet.a);
    let jb = bg.acs(q, &jet.b);
    let c1 = jet.a.iter().zip(&jb).map(|(x, y)| 0.5 * (x - y)).collect();
    let c2 = jet.b.iter().zip(&ja).map(|(x, y)| 0.5 * (x + y)).collect();
    (c1, c2)
}

/// `|∂̄_J f|² = g(c₁, c₁) + g(c₂, c₂)`, see [`dbar_vectors`].
pub fn dbar_squared(bg: &NKBackground, jet: &FaceJet, q: &[f64]) -> f64 {
    let (c1, c2) = dbar_vectors(bg, jet, q);
    bg.metric(q, &c1, &c1) + bg.metric(q, &c2, &c2)
}

fn per_face<T: Send>(
    bg: &NKBackground,
    curve: &CurveMesh,
    f: impl Fn(&FaceJet) -> T + Sync + Send,
) -> Result<Vec<T>> {
    (0..curve.faces.len())
        .into_par_iter()
        .map(|k| face_jet(bg, curve, k).map(|jet| f(&jet)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CRResidualReport {
    /// `√(Σ w|∂̄f|² / Σ w)`
    pub l2: f64,
    pub max: f64,
}

/// Cauchy–Riemann residual `∂̄_J f = ½(df + J∘df∘j)` per face, with `J`
/// sampled at the retracted circumcentre of the image triangle.
pub fn cr_residual(bg: &NKBackground, curve: &CurveMesh) -> Result<CRResidualReport> {
    let sq = per_face(bg, curve, |jet| dbar_squared(bg, jet, &jet.circumcenter))?;
    let mut weighted = 0.0;
    let mut max = 0.0f64;
    for (s, w) in sq.iter().zip(&curve.weights) {
        weighted += w * s;
        max = max.max(s.sqrt());
    }
    let total: f64 = curve.weights.iter().sum();
    Ok(CRResidualReport {
        l2: (weighted / total).sqrt().min(max),
        max,
    })
}

/// Per-face `ω(df t₁, df t₂)` at the retracted centroid.
pub fn volume_densities(bg: &NKBackground, curve: &CurveMesh) -> Result<Vec<f64>> {
    per_face(bg, curve, |jet| {
        bg.omega.eval(&jet.centroid, &[&jet.a, &jet.b])
    })
}

/// Signed `∫ f*ω`, quadrature `Σ w · ω(df t₁, df t₂)`.
pub fn curve_volume(bg: &NKBackground, curve: &CurveMesh) -> Result<f64> {
    let d = volume_densities(bg, curve)?;
    Ok(d.iter().zip(&curve.weights).map(|(x, w)| x * w).sum())
}

/// `∫ √det(g(df tᵢ, df tⱼ))`, the induced Riemannian area.
pub fn riemannian_area(bg: &NKBackground, curve: &CurveMesh) -> Result<f64> {
    let d = per_face(bg, curve, |jet| {
        let q = &jet.centroid;
        let aa = bg.metric(q, &jet.a, &jet.a);
        let bb = bg.metric(q, &jet.b, &jet.b);
        let ab = bg.metric(q, &jet.a, &jet.b);
        (aa * bb - ab * ab).max(0.0).sqrt()
    })?;
    Ok(d.iter().zip(&curve.weights).map(|(x, w)| x * w).sum())
}
