//! Discrete pseudoholomorphic curves: meshes, Cauchy–Riemann residuals,
//! `ω`-volume and Riemannian area.

pub mod integrals;
pub mod mesh;
pub mod seeds;

pub use integrals::{cr_residual, curve_volume, riemannian_area, CRResidualReport};
pub use mesh::{icosphere, CurveMesh, MeshVertex};
pub use seeds::{great_sphere_curve, sphere_in_plane, subtorus_family};
