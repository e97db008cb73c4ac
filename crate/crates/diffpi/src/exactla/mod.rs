//! Exact rational arithmetic and sparse linear algebra.

mod rank;
mod scalar;
mod sparse;

pub use rank::{kernel_contains, rank_insert, trace_on_quotient, RankAccumulator, SpanSolver};
pub use scalar::{ParseScalarError, Scalar};
pub use sparse::{SparseMatrix, SparseVec};
