//! Sperner k-partition systems: families of k-partitions of an n-set whose
//! classes, taken together, form an antichain.
//!
//! The crate provides the data model and verifier ([`model`]), witness
//! constructions ([`construct`]), exact bounds on the largest system size
//! ([`bounds`]), maximum-clique search over all candidate partitions
//! ([`search`]), and the file formats and fixtures ([`format`],
//! [`fixtures`]).

pub mod bounds;
pub mod construct;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod model;
pub mod plan;
pub mod search;

pub use error::{Error, Result};
pub use model::{
    incomparable, is_almost_uniform, relabel, validate_partition, verify_sperner, ClassSet,
    Partition, PartitionSystem, Relation, SpernerReport, Violation,
};
