//! Differential polynomials: monomials in variables carrying operator labels from `W`.

mod index;
mod parse;
mod poly;

pub use index::{perm_rank, perm_unrank, MultilinearIndex};
pub use parse::{monomial, parse_list, parse_plain, parse_polynomial};
pub use poly::{
    apply_generator, apply_label, apply_word, evaluate, multilinearize, permutations, substitute,
    DiffMonomial, DiffPolynomial, Factor, PolyDisplay,
};
