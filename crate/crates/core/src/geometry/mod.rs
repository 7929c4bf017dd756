//! Pointwise tensor calculus: tangent spaces, differential forms,
//! finite-difference exterior derivatives and `(p,q)`-type decomposition.

pub mod coframe;
pub mod exterior;
pub mod form;
pub mod manifold;
pub mod types;

pub use coframe::{build_unitary_coframe, UnitaryCoframe};
pub use exterior::{derivative_field, exterior_derivative, DEFAULT_RELATIVE_STEP};
pub use form::{wedge, FormField, FormValue};
pub use manifold::{
    tangent_project, AlmostHermitian, FlatModel, FlatTorus, HomogeneousChart, Manifold,
    PointStructure, RoundSphere, SharedGeometry, TangentVector,
};
pub use types::{type_decompose, TypeSpectrum};
