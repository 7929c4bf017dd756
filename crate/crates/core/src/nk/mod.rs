//! Concrete almost Hermitian backgrounds and the checks of their structure
//! equations.

pub mod background;
pub mod checks;
pub mod geometry;
pub mod s3s3;
pub mod s6;
pub mod torus;
pub mod trig;

pub use background::{BackgroundDescriptor, BackgroundSpec, DerivativeMethod, NKBackground};
pub use checks::{
    lambda_estimate, second_structure_equation_residual, structure_invariants, type_residual,
    type_residual_at, LambdaEstimate, StructureInvariants, TypeResidualReport,
};
pub use s3s3::{
    find_nk_metric, s3s3_background, s3s3_type_residual, structure_constant_table, NkMetricSearch,
    S3S3MetricParams,
};
pub use s6::s6_background;
pub use torus::torus_testbed;
pub use trig::TrigPoly;
