use serde::Serialize;
use sha2::{Digest, Sha256};

use super::codim::{codimension, identity_witness, CodimReport};
use super::consequence::{consequence_space_until, ConsequenceSpace};
use super::plan::{EvaluationPlan, PlanMode};
use crate::diffpoly::DiffPolynomial;
use crate::error::{Error, Result};
use crate::fdalg::{FDAlgebra, OperatorBasis};

/// Noted in every verdict: labels are reduced through `W`.
pub const W_REDUCTION_ASSUMPTION: &str = "labels are reduced in the operator algebra W, which identifies \
     operators equal on A; exact for generating sets that contain the relations of W";

/// Evaluation rank against the consequence bound in one degree.
#[derive(Clone, Debug, Serialize)]
pub struct SandwichVerdict {
    pub n: usize,
    /// `c_n` from evaluation.
    pub lower: usize,
    /// `dim P_n^W − dim(P_n^W ∩ ⟨S⟩)`.
    pub upper: usize,
    pub equal: bool,
    pub closed_form: Option<u64>,
    pub matches_closed_form: Option<bool>,
    pub mode: PlanMode,
    pub lower_exact: bool,
    pub ambient: usize,
    pub consequence_dim: usize,
    /// Generation stopped as soon as the bound met the evaluation rank.
    pub stopped_early: bool,
    pub generators: Vec<String>,
    pub gens_hash: String,
    pub assumptions: Vec<String>,
}

/// SHA-256 of the generators' text forms, one per line.
pub fn generator_hash(gens: &[String]) -> String {
    let mut h = Sha256::new();
    for g in gens {
        h.update(g.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Checks that `s` generates all identities of `A` in degree `n`: the evaluation rank
/// (lower bound for `c_n`) must meet `dim P_n^W` minus the consequence dimension (upper
/// bound).
pub fn verify_generating_set(
    a: &FDAlgebra,
    w: &OperatorBasis,
    s: &[DiffPolynomial],
    n: usize,
    closed_form: Option<u64>,
    plan: &EvaluationPlan,
) -> Result<SandwichVerdict> {
    let generators: Vec<String> = s.iter().map(|g| g.display(Some(w)).to_string()).collect();
    for (g, text) in s.iter().zip(&generators) {
        if let Some(tuple) = identity_witness(a, w, g)? {
            return Err(Error::NotAnIdentity { generator: text.clone(), tuple });
        }
    }
    let lower = codimension(a, w, n, plan)?;
    let target = lower.ambient - lower.c_n;
    let space = consequence_space_until(s, w, n, Some(target))?;
    verdict(&lower, &space, closed_form, generators)
}

fn verdict(
    lower: &CodimReport,
    space: &ConsequenceSpace,
    closed_form: Option<u64>,
    generators: Vec<String>,
) -> Result<SandwichVerdict> {
    if space.dim() > lower.ambient - lower.c_n {
        return Err(Error::InconsistentBasis(format!(
            "consequences span {} dimensions but only {} monomial combinations vanish",
            space.dim(),
            lower.ambient - lower.c_n
        )));
    }
    let upper = lower.ambient - space.dim();
    Ok(SandwichVerdict {
        n: lower.n,
        lower: lower.c_n,
        upper,
        equal: upper == lower.c_n,
        closed_form,
        matches_closed_form: closed_form.map(|c| c == lower.c_n as u64 && upper == lower.c_n),
        mode: lower.mode,
        lower_exact: lower.exact,
        ambient: lower.ambient,
        consequence_dim: space.dim(),
        stopped_early: !space.complete,
        gens_hash: generator_hash(&generators),
        generators,
        assumptions: vec![W_REDUCTION_ASSUMPTION.to_string()],
    })
}
