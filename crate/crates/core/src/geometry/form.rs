use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{precondition, Result};
use crate::linalg::{combinations, permutation_sign};

pub type FormEvaluator = dyn Fn(&[f64], &[&[f64]]) -> f64 + Send + Sync;

/// A degree-`k` differential form given by a pointwise evaluator
/// `(point, k ambient vectors) → value`.
///
/// Wedge products use the determinant convention:
/// `(dx∧dy)(u, v) = u_x v_y − u_y v_x`, with no `1/k!` factor.
#[derive(Clone)]
pub struct FormField {
    degree: usize,
    radius: f64,
    eval: Arc<FormEvaluator>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormField")
            .field("degree", &self.degree)
            .field("radius", &self.radius)
            .finish_non_exhaustive()
    }
}

impl FormField {
    /// `radius` is the length scale over which the form varies; finite
    /// differences use steps well below it.
    pub fn new<F>(degree: usize, radius: f64, eval: F) -> Result<Self>
    where
        F: Fn(&[f64], &[&[f64]]) -> f64 + Send + Sync + 'static,
    {
        if degree > 6 {
            return Err(precondition(format!("form degree {degree} exceeds 6")));
        }
        if !(radius > 0.0) {
            return Err(precondition("smoothness radius must be positive"));
        }
        Ok(Self {
            degree,
            radius,
            eval: Arc::new(eval),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eval(&self, p: &[f64], vectors: &[&[f64]]) -> f64 {
        debug_assert_eq!(vectors.len(), self.degree);
        (self.eval)(p, vectors)
    }

    /// Convenience for owned vectors.
    pub fn eval_vecs(&self, p: &[f64], vectors: &[Vec<f64>]) -> f64 {
        let refs: Vec<&[f64]> = vectors.iter().map(Vec::as_slice).collect();
        self.eval(p, &refs)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.eval.clone();
        Self {
            degree: self.degree,
            radius: self.radius,
            eval: Arc::new(move |p, v| c * inner(p, v)),
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(precondition("cannot add forms of different degree"));
        }
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Ok(Self {
            degree: self.degree,
            radius: self.radius.min(other.radius),
            eval: Arc::new(move |p, v| a(p, v) + b(p, v)),
        })
    }

    /// `α ∧ β` as a sum over shuffles.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let (k, l) = (self.degree, other.degree);
        if k + l > 6 {
            return Err(precondition(format!("wedge degree {} exceeds 6", k + l)));
        }
        let shuffles: Vec<(f64, Vec<usize>, Vec<usize>)> = combinations(k + l, k)
            .into_iter()
            .map(|first| {
                let rest: Vec<usize> = (0..k + l).filter(|i| !first.contains(i)).collect();
                let perm: Vec<usize> = first.iter().chain(&rest).copied().collect();
                (permutation_sign(&perm), first, rest)
            })
            .collect();
        let (a, b) = (self.eval.clone(), other.eval.clone());
        Ok(Self {
            degree: k + l,
            radius: self.radius.min(other.radius),
            eval: Arc::new(move |p, v| {
                shuffles
                    .iter()
                    .map(|(sign, first, rest)| {
                        let va: Vec<&[f64]> = first.iter().map(|&i| v[i]).collect();
                        let vb: Vec<&[f64]> = rest.iter().map(|&i| v[i]).collect();
                        sign * a(p, &va) * b(p, &vb)
                    })
                    .sum()
            }),
        })
    }

    /// Components of the form on all increasing `k`-subsets of `frame`.
    pub fn value_on_frame(&self, p: &[f64], frame: &[Vec<f64>]) -> FormValue {
        let components = combinations(frame.len(), self.degree)
            .iter()
            .map(|idx| {
                let vs: Vec<&[f64]> = idx.iter().map(|&i| frame[i].as_slice()).collect();
                self.eval(p, &vs)
            })
            .collect();
        FormValue {
            degree: self.degree,
            point: p.to_vec(),
            frame: frame.to_vec(),
            components,
        }
    }
}

/// Wedge of two form fields; see [`FormField::wedge`].
pub fn wedge(a: &FormField, b: &FormField) -> Result<FormField> {
    a.wedge(b)
}

/// A `k`-form fully evaluated at one point: its components on the
/// increasing `k`-subsets of a metric-orthonormal real frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FormValue {
    pub degree: usize,
    pub point: Vec<f64>,
    pub frame: Vec<Vec<f64>>,
    pub components: Vec<f64>,
}

impl FormValue {
    /// Norm induced by the metric (sum of squared components).
    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Pointwise inner product; both values must share a frame.
    pub fn inner(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.components.len(), other.components.len());
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `self + s·other` (same frame).
    pub fn add_scaled(&self, s: f64, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.components.iter_mut().zip(&other.components) {
            *a += s * b;
        }
        out
    }

    /// Complex-multilinear evaluation on vectors given by their complex
    /// coordinates in `self.frame` (`coords[j][i]` for vector `j`, frame
    /// element `i`).
    pub fn evaluate_complex(&self, coords: &[Vec<Complex64>]) -> Complex64 {
        let n = self.frame.len();
        combinations(n, self.degree)
            .iter()
            .zip(&self.components)
            .filter(|(_, c)| **c != 0.0)
            .map(|(idx, &c)| {
                let sub: Vec<Vec<Complex64>> = coords
                    .iter()
                    .map(|row| idx.iter().map(|&i| row[i]).collect())
                    .collect();
                determinant(sub) * c
            })
            .sum()
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            let f = m[r][col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let sub = m[col][c] * f;
                m[r][c] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;

    fn coordinate_form(i: usize) -> FormField {
        FormField::new(1, 1.0, move |_, v| v[0][i]).unwrap()
    }

    #[test]
    fn dx_wedge_dy_convention() {
        let w = coordinate_form(0).wedge(&coordinate_form(1)).unwrap();
        let p = [0.0; 6];
        assert_eq!(w.eval(&p, &[&unit(6, 0), &unit(6, 1)]), 1.0);
        let u = [1.0, 2.0, 0.0, 0.0, 0.0, 0.0];
        let v = [3.0, 5.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(w.eval(&p, &[&u, &v]), 1.0 * 5.0 - 2.0 * 3.0);
    }

    #[test]
    fn one_form_wedge_itself_vanishes() {
        let a = FormField::new(1, 1.0, |_, v| 0.3 * v[0][0] - 1.7 * v[0][2] + v[0][5]).unwrap();
        let w = a.wedge(&a).unwrap();
        let p = [0.0; 6];
        let x = [0.2, -1.0, 0.4, 0.0, 2.0, 1.5];
        let y = [1.0, 0.3, -0.4, 0.8, 0.0, -0.6];
        assert!(w.eval(&p, &[&x, &y]).abs() < 1e-15);
    }

    #[test]
    fn degree_overflow_rejected() {
        let a = FormField::new(4, 1.0, |_, _| 0.0).unwrap();
        let b = FormField::new(3, 1.0, |_, _| 0.0).unwrap();
        assert!(a.wedge(&b).is_err());
        assert!(FormField::new(7, 1.0, |_, _| 0.0).is_err());
        assert!(FormField::new(1, 0.0, |_, _| 0.0).is_err());
    }

    #[test]
    fn complex_determinant() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let m = vec![
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, -1.0), c(3.0, 2.0)],
        ];
        let expect = c(1.0, 1.0) * c(3.0, 2.0) - c(2.0, 0.0) * c(0.0, -1.0);
        assert!((determinant(m) - expect).norm() < 1e-14);
    }

    #[test]
    fn complex_evaluation_matches_real_on_real_vectors() {
        let a = coordinate_form(0)
            .wedge(&coordinate_form(3))
            .unwrap()
            .sum(
                &coordinate_form(1)
                    .wedge(&coordinate_form(2))
                    .unwrap()
                    .scaled(-2.0),
            )
            .unwrap();
        let frame: Vec<Vec<f64>> = (0..6).map(|i| unit(6, i)).collect();
        let p = [0.0; 6];
        let value = a.value_on_frame(&p, &frame);
        let x = [0.5, -1.0, 2.0, 0.1, 0.0, 0.3];
        let y = [1.5, 0.2, -0.7, 1.0, 0.4, 0.0];
        let coords: Vec<Vec<Complex64>> = [x, y]
            .iter()
            .map(|v| v.iter().map(|&t| Complex64::new(t, 0.0)).collect())
            .collect();
        let z = value.evaluate_complex(&coords);
        assert!((z.re - a.eval(&p, &[&x, &y])).abs() < 1e-14);
        assert_eq!(z.im, 0.0);
    }
}
