//! Exact differential codimensions and cocharacters of finite-dimensional algebras with
//! derivations.
//!
//! The crate is layered: [`exactla`] does exact sparse linear algebra, [`fdalg`] holds
//! algebras and the operator algebra `W` generated by their derivations, [`diffpoly`]
//! models differential polynomials, [`ideals`] computes codimensions, consequence spaces
//! and sandwich verdicts, [`repsn`] supplies symmetric-group characters, and [`zoo`] builds
//! the named example algebras.
//!
//! ```
//! use diffpi::ideals::{codimension, EvaluationPlan};
//! use diffpi::zoo::{build_named, ModelSpec};
//!
//! let model = build_named(&"ut2_delta".parse::<ModelSpec>().unwrap()).unwrap();
//! let report = codimension(&model.algebra, &model.w, 3, &EvaluationPlan::full()).unwrap();
//! assert_eq!(report.c_n, 13);
//! ```

pub mod diffpoly;
pub mod error;
pub mod exactla;
pub mod fdalg;
pub mod ideals;
pub mod repsn;
pub mod zoo;

pub use error::{Error, Result};
