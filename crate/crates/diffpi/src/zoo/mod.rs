//! The named algebras with derivations, their closed forms and generating sets, and the
//! truncated Grassmann machinery.

pub mod grassmann;
mod models;
mod registry;

pub use grassmann::{
    canonical_grassmann_plan, grassmann_algebra, grassmann_der_codim, grassmann_scan,
    tuple_patterns, CanonicalPlan, GrassmannMonomial, ScanReport, SupportPattern,
};
pub use models::{
    build_named, default_truncation, list_models, Action, Model, ModelSpec, ModelSummary,
};
pub use registry::{closed_form, expected_multiplicities, generator_set, generator_texts};

use crate::error::Result;
use crate::fdalg::AlgebraJson;

/// A model in the algebra JSON format.
pub fn export_json(model: &Model) -> Result<String> {
    Ok(serde_json::to_string_pretty(&AlgebraJson::from_algebra(&model.algebra))?)
}
