//! Torsion-free abelian groups of finite rank.

pub mod enumerate;
pub mod presentation;
pub mod reader;
pub mod reductions;
pub mod types;

pub use presentation::{EmitterConfig, GroupEmitter, QrGroup, QrVector, SpanGroup};
pub use reader::{extract_type, independence_check, GroupView, Independence};
pub use reductions::{
    cof_to_tfab1, cof_type, e0_operator, e0_to_tfab1, e0_type, rank1_from_type, AddZ,
};
pub use types::{
    iso_rank1, DivisibilityType, IsoThreshold, Rank1Group, TypeEquivalenceVerdict, TypeValue,
    Verdict,
};
