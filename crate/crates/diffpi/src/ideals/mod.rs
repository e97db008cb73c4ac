//! Codimensions by evaluation rank, identity tests, consequence spaces of generating sets,
//! sandwich verification and cocharacters.

mod codim;
mod consequence;
mod plan;
mod verify;

pub use codim::{
    cocharacter, cocharacter_from_functionals, cocharacter_from_kernel, codimension,
    identity_witness, is_identity, Cocharacter, CodimReport,
};
pub use consequence::{consequence_space, in_ideal, ConsequenceSpace};
pub use plan::{configured_cap, EvaluationPlan, PlanMode, DEFAULT_CAP, DEFAULT_PATIENCE};
pub use verify::{generator_hash, verify_generating_set, SandwichVerdict, W_REDUCTION_ASSUMPTION};
