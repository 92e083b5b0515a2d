//! Exact resolution hardness measures for small CNF clause-sets: tree
//! hardness, depth, symmetric and asymmetric width, semantic, resolution
//! and tree space, their game and consistency characterisations, and the
//! standard formula families.

pub mod bits;
pub mod cnf;
pub mod consistency;
pub mod corpus;
pub mod dimacs;
pub mod error;
pub mod extensions;
pub mod families;
pub mod games;
pub mod measures;
pub mod reductions;
pub mod report;
pub mod resolution;
pub mod saturation;
pub mod space;

pub use cnf::{Clause, ClauseSet, Literal, PartialAssignment};
pub use error::{Error, Result};
pub use measures::MeasureKind;
