use rayon::prelude::*;

use crate::curves::mesh::CurveMesh;
use crate::error::{precondition, Result};
use crate::linalg::{norm, sub};
use crate::nk::background::NKBackground;

/// `sup_{x∈X} inf_{y∈Y} d(x, y)` with an early exit once a row cannot raise
/// the running maximum.
fn directed<D>(x: &[Vec<f64>], y: &[Vec<f64>], dist: &D) -> f64
where
    D: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    x.par_iter()
        .map(|p| {
            let mut best = f64::INFINITY;
            for q in y {
                let d = dist(p, q);
                if d < best {
                    best = d;
                    if best == 0.0 {
                        break;
                    }
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

/// Hausdorff distance between finite samples under a caller-supplied metric.
pub fn hausdorff_distance_with<D>(x: &[Vec<f64>], y: &[Vec<f64>], dist: D) -> Result<f64>
where
    D: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    if x.is_empty() || y.is_empty() {
        return Err(precondition("Hausdorff distance of an empty sample"));
    }
    Ok(directed(x, y, &dist).max(directed(y, x, &dist)))
}

/// `d_H(X, Y) = max(sup_x inf_y |x − y|, sup_y inf_x |x − y|)` with the
/// Euclidean (chordal) distance.
pub fn hausdorff_distance(x: &[Vec<f64>], y: &[Vec<f64>]) -> Result<f64> {
    hausdorff_distance_with(x, y, |a, b| norm(&sub(a, b)))
}

/// Hausdorff distance between the vertex sets of two curves, using chords
/// of the background (wrapped on the torus).
pub fn curve_hausdorff(bg: &NKBackground, a: &CurveMesh, b: &CurveMesh) -> Result<f64> {
    let geo = bg.geometry.clone();
    hausdorff_distance_with(&a.points(), &b.points(), move |p, q| norm(&geo.chord(p, q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_example() {
        assert_eq!(hausdorff_distance(&[vec![0.0]], &[vec![3.0]]).unwrap(), 3.0);
        let x = vec![vec![0.0], vec![1.0]];
        assert_eq!(hausdorff_distance(&x, &x).unwrap(), 0.0);
        let y = vec![vec![0.0], vec![1.0], vec![5.0]];
        assert_eq!(hausdorff_distance(&x, &y).unwrap(), 4.0);
        assert_eq!(hausdorff_distance(&y, &x).unwrap(), 4.0);
    }

    #[test]
    fn empty_rejected() {
        assert!(hausdorff_distance(&[], &[vec![1.0]]).is_err());
        assert!(hausdorff_distance(&[vec![1.0]], &[]).is_err());
    }
}
#[cfg(test)]
mod axioms {
    use super::*;
    use proptest::collection::vec;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

    fn sample() -> impl proptest::strategy::Strategy<Value = Vec<Vec<f64>>> {
        vec(vec(-1.0..1.0f64, 7), 1..12)
    }

    proptest! {
        #[test]
        fn metric_axioms(x in sample(), y in sample(), z in sample()) {
            let xy = hausdorff_distance(&x, &y).unwrap();
            let yx = hausdorff_distance(&y, &x).unwrap();
            let xz = hausdorff_distance(&x, &z).unwrap();
            let yz = hausdorff_distance(&y, &z).unwrap();
            prop_assert!(xy >= 0.0);
            prop_assert_eq!(xy, yx);
            prop_assert_eq!(hausdorff_distance(&x, &x).unwrap(), 0.0);
            prop_assert!(xz <= xy + yz + 1e-12);
        }
    }
}
