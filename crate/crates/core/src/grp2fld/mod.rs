//! From torsion-free abelian groups to fields: G goes to the quotient field of
//! its group ring, and isomorphisms act on monomials.

pub mod formal;
pub mod key;
pub mod morphism;
pub mod phi;
pub mod probe;
pub mod ring;

pub use key::{Basis, ExponentMap, Fingerprint};
pub use morphism::{check_homomorphism, phi_morphism, PhiMorphism};
pub use phi::{phi_object, Located, PhiConfig, PhiEmitter};
pub use probe::{compare_root_profiles, root_profile, zero_divisor_probe, ProbeReport};
pub use ring::{
    monomial_map, quotient_eq, ring_mul, ring_pow, Equality, FieldQuotient, MonomialCombination,
};
