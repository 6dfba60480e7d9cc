//! Executable reductions between countable algebraic structures.
//!
//! Structures have universe the natural numbers and are handled through
//! their atomic diagrams. The crate collects the exact arithmetic kernel,
//! torsion-free abelian groups of finite rank, fields of finite transcendence
//! degree, the group-to-field and field-to-henselization functors, bounded
//! Scott-sentence evaluation, and the chip-function reduction of Sigma^0_3
//! equivalence relations to rank-1 groups.

pub mod diagrams;
pub mod exact_algebra;
pub mod fd_fields;
pub mod grp2fld;
pub mod hensel;
pub mod primes;
pub mod scott;
pub mod sigma3;
pub mod streams;
pub mod tfab;
