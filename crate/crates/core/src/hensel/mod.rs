//! Henselization of F(t) at the t-adic valuation: series, algebraic
//! elements, the field emitter, residues and the action on isomorphisms.

pub mod element;
pub mod emit;
pub mod morphism;
pub mod residue;
pub mod series;

pub use element::{
    helem_eq, newton, separation_bound, v_t, HenselElement, HenselError, TAdicValue,
};
pub use emit::{HenselConfig, HenselEmitter, LiftRecord};
pub use morphism::{check_base_map, check_facts_commute, hensel_morphism, HenselMorphism};
pub use residue::{residue, residue_check, ResidueReport};
pub use series::{Series, EXACT};
