//! Countable reduction of a Sigma^0_3 equivalence relation on a family of
//! streams to rank-1 torsion-free groups, one group per stream.
//!
//! Each prime p_{m,n,k} is handled by its own [`TripleMachine`], which reads
//! the shared chip log; membership of a rational in G_l factors the
//! denominator and asks the owning machines.

pub mod audit;
pub mod chips;
pub mod family;
pub mod machine;
pub mod oracle;
pub mod relation;

#[cfg(test)]
mod tests;

pub use audit::{audit_invariants, audit_point, Sigma3Audit, Violation};
pub use chips::{decode_stage, pair_index, pair_of_index, Chip, ChipScheduler};
pub use family::{
    factor, prime_owner, profile, reduce, triple_prime, FamilyCore, GroupFamilyView, ReduceOutput,
    SharedCore, Triple,
};
pub use machine::{MachineError, MachineState, Side, TripleMachine};
pub use oracle::{naive_oracle, NaiveOracle};
pub use relation::{
    relation_by_name, ConstRelation, E0Relation, OracleFamily, Prefix, Sigma3Relation,
};
