//! Congruence lattices of chain ideals in finite categories of transformations, diagrams and
//! matrices, treated as partial semigroups.

pub mod congruence;
pub mod constructions;
pub mod elements;
pub mod green;
pub mod groups;
pub mod instance;
pub mod lattice;
pub mod predict;
pub mod properties;
pub mod psgrp;

pub use congruence::{all_congruences, CongLattice, Closure, Congruence, LatticeOptions};
pub use elements::{Elem, Family, FamilySpec};
pub use green::Green;
pub use instance::Instance;
pub use psgrp::PartialSemigroup;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("size guard: {0}")]
    Guard(String),
    #[error("structure check failed: {0}")]
    Structure(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
}
