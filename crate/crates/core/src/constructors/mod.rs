//! Builders for the named groups, the group-spec grammar and the
//! orthogonal models.

mod build;
pub mod model;
mod spec;

pub use build::{
    alternating, build, build_str, central_product, direct_product, elementary_abelian, metacyclic, pgl2,
    psl2, psl3, signed_even, sl2, symmetric, sz8, BuildError,
};
pub use model::{orthogonal_model, LinearModel, ModelError, ModelKind};
pub use spec::{GroupSpec, SpecError};
