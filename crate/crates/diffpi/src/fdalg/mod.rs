//! Finite-dimensional algebras acted on by derivations, and the operator algebra the
//! derivations generate inside `End(A)`.

mod algebra;
mod json;
mod operators;

pub use algebra::{lie_structure, Derivation, FDAlgebra, LieStructure, Multiplication};
pub use json::{AlgebraJson, DerivationJson};
pub use operators::{operator_closure, OperatorBasis};

use crate::error::Result;
use crate::exactla::{SparseMatrix, SparseVec};

/// Runs every structural check and returns the algebra back.
pub fn validate_algebra(a: FDAlgebra) -> Result<FDAlgebra> {
    a.validate()?;
    Ok(a)
}

pub fn inner_derivation(a: &FDAlgebra, element: &SparseVec) -> Result<SparseMatrix> {
    a.inner_derivation(element)
}

/// `(dim Der(A), basis)`.
pub fn derivation_space(a: &FDAlgebra) -> (usize, Vec<SparseMatrix>) {
    let basis = a.derivation_space();
    (basis.len(), basis)
}
