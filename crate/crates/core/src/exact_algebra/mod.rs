//! Exact arithmetic: rationals, dense polynomials, cyclotomic fields,
//! rational functions and resultants.

pub mod cyclo;
pub mod field;
pub mod poly;
pub mod ratfunc;
pub mod resultant;

pub use cyclo::{cyclo_inverse, cyclotomic, has_primitive_root, valid_conductor, Cyclo};
pub use field::{height, int, parse_rational, rat, Field, Rational};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use resultant::{discriminant, resultant};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("unsupported conductor {0}: need a squarefree product of odd primes")]
    UnsupportedConductor(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("cannot parse {0:?}")]
    Parse(String),
}
