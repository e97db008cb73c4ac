//! Symmetric-group characters, cocharacter decomposition and highest-weight-vector lower
//! bounds for multiplicities.

mod character;
mod partition;
mod tableau;

pub use character::{decompose, mn_character, MultiplicityMap};
pub use partition::{CycleType, Partition};
pub use tableau::{default_points, hwv_polynomial, multiplicity_lower_bound, DecoratedTableau};
