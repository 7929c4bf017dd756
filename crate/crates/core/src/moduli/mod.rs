//! Families of pseudoholomorphic curves: Hausdorff distance, continuation,
//! volume drift and the Stokes identity for the swept 3-chain.

pub mod continuation;
pub mod family;
pub mod hausdorff;
pub mod stokes;

pub use continuation::{
    continue_curve, gauss_newton_project, ContinuationFailure, ContinuationOptions, Drive,
    FailureKind, GaussNewtonReport,
};
pub use family::{
    exact_family, g2_orbit_family, subtorus_path, uniform_times, FamilyPath, Provenance,
};
pub use hausdorff::{curve_hausdorff, hausdorff_distance, hausdorff_distance_with};
pub use stokes::{
    stokes_check, volume_drift, StokesReport, StokesStep, VolumeDrift, STOKES_RELATIVE_TOLERANCE,
};
