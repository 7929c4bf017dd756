//! Octonion algebra, the cross product on imaginary octonions and `G₂`
//! elements built from basic triples.
//!
//! # Multiplication table
//!
//! Octonions are built by Cayley–Dickson doubling of the quaternions:
//! a pair `(a, b)` of quaternions stands for `a + b·e4` and
//!
//! ```text
//! (a, b)(c, d) = (a c − d̄ b,  d a + b c̄)
//! ```
//!
//! The basis is `1, e1, e2, e3` = quaternion `1, i, j, k`, `e4 = (0, 1)`,
//! and `e5 = e1 e4`, `e6 = e2 e4`, `e7 = e3 e4`. The resulting products of
//! imaginary units (`row · column`, `±k` meaning `±e_k`, diagonal entries
//! are `e_i e_i = −1`):
//!
//! ```text
//!        e1  e2  e3  e4  e5  e6  e7
//!   e1    .  +3  -2  +5  -4  -7  +6
//!   e2   -3   .  +1  +6  +7  -4  -5
//!   e3   +2  -1   .  +7  -6  +5  -4
//!   e4   -5  -6  -7   .  +1  +2  +3
//!   e5   +4  -7  +6  -1   .  -3  +2
//!   e6   +7  +4  -5  -2  +3   .  -1
//!   e7   -6  +5  +4  -3  -2  +1   .
//! ```
//!
//! [`MultiplicationTable::standard`] derives this table from the product
//! itself and is what gets exported for other tools.

use std::ops::{Add, Index, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::scalar::{Real, Ring};

/// Gram determinant below which a random triple is redrawn.
const DEGENERATE_GRAM: f64 = 1e-6;

/// Residual allowed on the orthogonality conditions of a basic triple.
const TRIPLE_TOLERANCE: f64 = 1e-8;

#[inline]
fn quat_mul<T: Ring>(a: [T; 4], b: [T; 4]) -> [T; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

#[inline]
fn quat_conj<T: Ring>(a: [T; 4]) -> [T; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

#[inline]
fn quat_add<T: Ring>(a: [T; 4], b: [T; 4]) -> [T; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

#[inline]
fn quat_sub<T: Ring>(a: [T; 4], b: [T; 4]) -> [T; 4] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

/// An element of the octonions: coefficient on `1` followed by `e1..e7`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Octonion<T> {
    pub coeffs: [T; 8],
}

impl<T: Ring> Octonion<T> {
    pub fn new(coeffs: [T; 8]) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new([T::zero(); 8])
    }

    pub fn one() -> Self {
        Self::unit(0)
    }

    /// Basis element: `0` is the real unit, `1..=7` are `e1..e7`.
    pub fn unit(index: usize) -> Self {
        let mut coeffs = [T::zero(); 8];
        coeffs[index] = T::one();
        Self::new(coeffs)
    }

    pub fn from_parts(re: T, im: ImOctonion<T>) -> Self {
        let mut coeffs = [re; 8];
        coeffs[1..].copy_from_slice(&im.coeffs);
        Self::new(coeffs)
    }

    pub fn re(&self) -> T {
        self.coeffs[0]
    }

    pub fn im(&self) -> ImOctonion<T> {
        let mut coeffs = [T::zero(); 7];
        coeffs.copy_from_slice(&self.coeffs[1..]);
        ImOctonion::new(coeffs)
    }

    pub fn conj(&self) -> Self {
        let mut c = self.coeffs;
        for x in &mut c[1..] {
            *x = -*x;
        }
        Self::new(c)
    }

    /// `|x|²`, exact over any ring.
    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, &x| acc + x * x)
    }

    pub fn dot(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.map(|x| x * s))
    }

    fn halves(&self) -> ([T; 4], [T; 4]) {
        let c = &self.coeffs;
        ([c[0], c[1], c[2], c[3]], [c[4], c[5], c[6], c[7]])
    }

    fn from_halves(a: [T; 4], b: [T; 4]) -> Self {
        Self::new([a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]])
    }
}

impl<T: Real> Octonion<T> {
    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }
}

/// The octonion product under the fixed Cayley–Dickson convention.
pub fn oct_mul<T: Ring>(a: &Octonion<T>, b: &Octonion<T>) -> Octonion<T> {
    let (p, q) = a.halves();
    let (r, s) = b.halves();
    let first = quat_sub(quat_mul(p, r), quat_mul(quat_conj(s), q));
    let second = quat_add(quat_mul(s, p), quat_mul(q, quat_conj(r)));
    Octonion::from_halves(first, second)
}

/// `(ab)c − a(bc)`.
pub fn associator<T: Ring>(a: &Octonion<T>, b: &Octonion<T>, c: &Octonion<T>) -> Octonion<T> {
    oct_mul(&oct_mul(a, b), c) - oct_mul(a, &oct_mul(b, c))
}

impl<T: Ring> Mul for Octonion<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        oct_mul(&self, &rhs)
    }
}

impl<T: Ring> Add for Octonion<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.coeffs;
        for (x, y) in c.iter_mut().zip(rhs.coeffs) {
            *x = *x + y;
        }
        Self::new(c)
    }
}

impl<T: Ring> Sub for Octonion<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Ring> Neg for Octonion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.map(|x| -x))
    }
}

/// A purely imaginary octonion, i.e. a vector of `Im O ≅ R⁷`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImOctonion<T> {
    pub coeffs: [T; 7],
}

impl<T: Ring> ImOctonion<T> {
    pub fn new(coeffs: [T; 7]) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new([T::zero(); 7])
    }

    /// `e_index`, with `index` in `1..=7`.
    pub fn unit(index: usize) -> Self {
        assert!(
            (1..=7).contains(&index),
            "imaginary unit index {index} out of range"
        );
        let mut coeffs = [T::zero(); 7];
        coeffs[index - 1] = T::one();
        Self::new(coeffs)
    }

    pub fn to_octonion(&self) -> Octonion<T> {
        Octonion::from_parts(T::zero(), *self)
    }

    pub fn dot(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn norm_sqr(&self) -> T {
        self.dot(self)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.map(|x| x * s))
    }

    /// Octonion product of two imaginary elements.
    pub fn mul_full(&self, other: &Self) -> Octonion<T> {
        oct_mul(&self.to_octonion(), &other.to_octonion())
    }

    /// `u × v`, see [`cross`].
    pub fn cross(&self, other: &Self) -> Self {
        cross(self, other)
    }

    /// Associative calibration `φ(u, v, w) = ⟨u × v, w⟩`.
    pub fn phi(&self, v: &Self, w: &Self) -> T {
        self.cross(v).dot(w)
    }
}

impl<T: Real> ImOctonion<T> {
    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn from_slice(v: &[T]) -> Self {
        let mut coeffs = [T::zero(); 7];
        coeffs.copy_from_slice(&v[..7]);
        Self::new(coeffs)
    }

    pub fn normalized(&self) -> Self {
        self.scale(T::one() / self.norm())
    }
}

impl<T: Ring> Add for ImOctonion<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.coeffs;
        for (x, y) in c.iter_mut().zip(rhs.coeffs) {
            *x = *x + y;
        }
        Self::new(c)
    }
}

impl<T: Ring> Sub for ImOctonion<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Ring> Neg for ImOctonion<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.map(|x| -x))
    }
}

impl<T> Index<usize> for ImOctonion<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coeffs[i]
    }
}

/// Cross product on `Im O`: `½(uv − vu)`, which is the imaginary part of
/// `uv` because `Re(uv) = −⟨u, v⟩` is symmetric.
pub fn cross<T: Ring>(u: &ImOctonion<T>, v: &ImOctonion<T>) -> ImOctonion<T> {
    u.mul_full(v).im()
}

/// Signed-index form of the multiplication table of `e1..e7`.
///
/// `table[i][j] = ±k` means `e_{i+1} e_{j+1} = ±e_k`; the diagonal holds `0`
/// and stands for `e_i e_i = −1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicationTable {
    pub convention: String,
    pub table: [[i8; 7]; 7],
}

impl MultiplicationTable {
    pub fn standard() -> Self {
        let mut table = [[0i8; 7]; 7];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if i == j {
                    continue;
                }
                let p = oct_mul(&Octonion::<i64>::unit(i + 1), &Octonion::<i64>::unit(j + 1));
                let (k, &c) = p
                    .coeffs
                    .iter()
                    .enumerate()
                    .find(|(_, c)| **c != 0)
                    .expect("product of units is a unit");
                *entry = (c * k as i64) as i8;
            }
        }
        Self {
            convention: "Cayley-Dickson doubling of quaternions: (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c)); \
                         e1,e2,e3 = i,j,k; e4 = (0,1); e5 = e1e4, e6 = e2e4, e7 = e3e4; \
                         entry +-k at row i, column j means e_i e_j = +-e_k; diagonal 0 means e_i e_i = -1"
                .to_string(),
            table,
        }
    }

    /// Product of imaginary units `e_i e_j` for `i, j` in `1..=7`:
    /// `(sign, index)` with index `0` for the real unit.
    pub fn product(&self, i: usize, j: usize) -> (i8, usize) {
        if i == j {
            (-1, 0)
        } else {
            let e = self.table[i - 1][j - 1];
            (e.signum(), e.unsigned_abs() as usize)
        }
    }
}

/// Element of `G₂ ⊂ SO(7)` acting on `Im O`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2Element<T> {
    /// Row-major 7×7 matrix; column `k` is the image of `e_{k+1}`.
    pub matrix: [[T; 7]; 7],
}

impl<T: Real> G2Element<T> {
    pub fn identity() -> Self {
        let mut matrix = [[T::zero(); 7]; 7];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self { matrix }
    }

    pub fn from_columns(cols: [ImOctonion<T>; 7]) -> Self {
        let mut matrix = [[T::zero(); 7]; 7];
        for (k, col) in cols.iter().enumerate() {
            for (i, row) in matrix.iter_mut().enumerate() {
                row[k] = col.coeffs[i];
            }
        }
        Self { matrix }
    }

    pub fn apply(&self, v: &ImOctonion<T>) -> ImOctonion<T> {
        let mut out = [T::zero(); 7];
        for (o, row) in out.iter_mut().zip(&self.matrix) {
            *o = row
                .iter()
                .zip(&v.coeffs)
                .fold(T::zero(), |acc, (&m, &x)| acc + m * x);
        }
        ImOctonion::new(out)
    }

    /// Apply to a point given as a plain slice of length 7.
    pub fn apply_slice(&self, v: &[T]) -> Vec<T> {
        self.apply(&ImOctonion::from_slice(v)).coeffs.to_vec()
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut matrix = [[T::zero(); 7]; 7];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, m) in row.iter_mut().enumerate() {
                *m = (0..7).fold(T::zero(), |acc, k| {
                    acc + self.matrix[i][k] * other.matrix[k][j]
                });
            }
        }
        Self { matrix }
    }

    pub fn transpose(&self) -> Self {
        let mut matrix = [[T::zero(); 7]; 7];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, m) in row.iter_mut().enumerate() {
                *m = self.matrix[j][i];
            }
        }
        Self { matrix }
    }

    /// `max |MᵀM − I|` entrywise.
    pub fn orthogonality_residual(&self) -> T {
        let mtm = self.transpose().compose(self);
        let mut worst = T::zero();
        for (i, row) in mtm.matrix.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((m - target).abs());
            }
        }
        worst
    }

    /// `max |M(u×v) − (Mu)×(Mv)|` over the given pairs.
    pub fn automorphism_residual(&self, pairs: &[(ImOctonion<T>, ImOctonion<T>)]) -> T {
        pairs.iter().fold(T::zero(), |worst, (u, v)| {
            let lhs = self.apply(&cross(u, v));
            let rhs = cross(&self.apply(u), &self.apply(v));
            let diff = lhs - rhs;
            worst.max(diff.coeffs.iter().fold(T::zero(), |m, x| m.max(x.abs())))
        })
    }

    pub fn cast<U: Real>(&self) -> G2Element<U> {
        G2Element {
            matrix: self
                .matrix
                .map(|row| row.map(|x| U::from(x).expect("finite matrix entry"))),
        }
    }
}

/// The triple `(e1, e2, e4)` that [`basic_triple_automorphism`] maps to its
/// arguments.
pub fn standard_triple<T: Real>() -> [ImOctonion<T>; 3] {
    [
        ImOctonion::unit(1),
        ImOctonion::unit(2),
        ImOctonion::unit(4),
    ]
}

/// The unique `G₂` element sending `(e1, e2, e4)` to the basic triple
/// `(f1, f2, f3)`.
///
/// Requires unit vectors with `f2 ⊥ f1` and `f3 ⊥ f1, f2, f1f2`; residuals
/// above `1e-8` are rejected.
pub fn basic_triple_automorphism<T: Real>(
    f1: &ImOctonion<T>,
    f2: &ImOctonion<T>,
    f3: &ImOctonion<T>,
) -> Result<G2Element<T>> {
    let tol = T::tolerance(TRIPLE_TOLERANCE);
    let f12 = cross(f1, f2);
    let checks = [
        ("|f1| = 1", (f1.norm_sqr() - T::one()).abs()),
        ("|f2| = 1", (f2.norm_sqr() - T::one()).abs()),
        ("|f3| = 1", (f3.norm_sqr() - T::one()).abs()),
        ("f2 ⊥ f1", f1.dot(f2).abs()),
        ("f3 ⊥ f1", f3.dot(f1).abs()),
        ("f3 ⊥ f2", f3.dot(f2).abs()),
        ("f3 ⊥ f1·f2", f3.dot(&f12).abs()),
    ];
    for (name, residual) in checks {
        if !(residual <= tol) {
            return Err(precondition(format!(
                "basic triple condition {name} fails with residual {residual:?}"
            )));
        }
    }
    let cols = [
        *f1,
        *f2,
        f12,
        *f3,
        cross(f1, f3),
        cross(f2, f3),
        cross(&f12, f3),
    ];
    Ok(G2Element::from_columns(cols))
}

fn gaussian_im(rng: &mut ChaCha8Rng) -> ImOctonion<f64> {
    let mut c = [0.0; 7];
    for x in &mut c {
        *x = rng.sample(StandardNormal);
    }
    ImOctonion::new(c)
}

/// Removes the components along the (orthonormal) `basis`.
fn orthogonalize(v: &ImOctonion<f64>, basis: &[ImOctonion<f64>]) -> ImOctonion<f64> {
    basis.iter().fold(*v, |acc, b| acc - b.scale(acc.dot(b)))
}

/// Gram–Schmidt a raw triple into a basic triple; `None` if any step is
/// closer to degenerate than the Gram-determinant threshold.
pub fn complete_basic_triple(raw: [ImOctonion<f64>; 3]) -> Option<[ImOctonion<f64>; 3]> {
    let n1 = raw[0].norm_sqr();
    if n1 < DEGENERATE_GRAM {
        return None;
    }
    let f1 = raw[0].scale(1.0 / n1.sqrt());
    let g2 = orthogonalize(&raw[1], &[f1]);
    // Ratio |g2|²/|raw|² is the normalised Gram determinant of (f1, raw).
    if g2.norm_sqr() < DEGENERATE_GRAM * raw[1].norm_sqr().max(1.0) {
        return None;
    }
    let f2 = g2.normalized();
    let f12 = cross(&f1, &f2);
    let g3 = orthogonalize(&raw[2], &[f1, f2, f12]);
    if g3.norm_sqr() < DEGENERATE_GRAM * raw[2].norm_sqr().max(1.0) {
        return None;
    }
    Some([f1, f2, g3.normalized()])
}

/// A random basic triple drawn from the seeded stream, redrawing
/// near-degenerate samples.
pub fn random_basic_triple(rng: &mut ChaCha8Rng) -> [ImOctonion<f64>; 3] {
    loop {
        let raw = [gaussian_im(rng), gaussian_im(rng), gaussian_im(rng)];
        if let Some(t) = complete_basic_triple(raw) {
            return t;
        }
    }
}

/// Deterministic pseudo-random `G₂` element.
pub fn random_g2(seed: u64) -> G2Element<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [f1, f2, f3] = random_basic_triple(&mut rng);
    basic_triple_automorphism(&f1, &f2, &f3).expect("Gram–Schmidt output is a basic triple")
}

/// A continuous path in `G₂` from the identity (`t = 0`) to the element
/// determined by `target` (`t = 1`).
///
/// At each `t` the standard triple is blended linearly towards the target
/// and re-orthogonalised into a basic triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct G2Path {
    pub target: [ImOctonion<f64>; 3],
}

impl G2Path {
    pub fn new(target: [ImOctonion<f64>; 3]) -> Self {
        Self { target }
    }

    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::new(random_basic_triple(&mut rng))
    }

    pub fn at(&self, t: f64) -> Result<G2Element<f64>> {
        let start = standard_triple::<f64>();
        let blend = |a: &ImOctonion<f64>, b: &ImOctonion<f64>| a.scale(1.0 - t) + b.scale(t);
        let raw = [
            blend(&start[0], &self.target[0]),
            blend(&start[1], &self.target[1]),
            blend(&start[2], &self.target[2]),
        ];
        let [f1, f2, f3] = complete_basic_triple(raw).ok_or_else(|| {
            precondition(format!(
                "G2 path passes through a degenerate triple at t = {t}"
            ))
        })?;
        basic_triple_automorphism(&f1, &f2, &f3)
    }
}
