//! Numerical toolkit for nearly Kähler six-manifolds and their
//! pseudoholomorphic curves.
//!
//! Conventions used throughout:
//! - `ω = g(·, J·)`;
//! - wedge products use the determinant normalisation, no `1/k!`;
//! - octonions follow the Cayley–Dickson table documented in [`octonion`].

// NaN-rejecting guards read `!(x > 0.0)`; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod curves;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod moduli;
pub mod nk;
pub mod octonion;
pub mod scalar;

pub use error::{Error, Result};
pub use octonion::{
    basic_triple_automorphism, cross, oct_mul, random_g2, G2Element, G2Path, ImOctonion,
    MultiplicationTable, Octonion,
};
pub use scalar::{Real, Ring};

pub type Octonion64 = Octonion<f64>;
pub type Octonion32 = Octonion<f32>;
pub type OctonionQ = Octonion<num_rational::Rational64>;
pub type ImOctonion64 = ImOctonion<f64>;
pub type ImOctonion32 = ImOctonion<f32>;
pub type G2Element64 = G2Element<f64>;
