//! Computational zero-sum theory over finite abelian groups: subset-sum
//! sets, regular sequences, Davenport constants, exact `c₀` by exhaustive
//! search, and vanishing products in the group algebra.

pub mod algebra;
pub mod error;
pub mod group;
pub mod invariants;
pub mod search;
pub mod sequence;
pub mod set;

pub use error::{Result, ZsError};
pub use group::{AbelianGroup, GroupElement, Subgroup};
pub use search::{SearchBudget, SearchReport};
pub use sequence::{random_regular, Regularity, Sequence, SequenceFile};
pub use set::ElementSet;
