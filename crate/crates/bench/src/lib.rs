//! Fixtures shared by the criterion benches.

use effred::exact_algebra::{int, Field, Poly, RatFunc, Rational};
use effred::tfab::{DivisibilityType, GroupEmitter, Rank1Group};

pub fn rank1(ty: &str) -> GroupEmitter {
    GroupEmitter::with_defaults(Box::new(Rank1Group {
        ty: DivisibilityType::parse(ty).expect("type literal"),
    }))
}

/// Y^2 - (1 + t)
pub fn sqrt_1_plus_t() -> Poly<RatFunc<Rational>> {
    let rad = RatFunc::from_poly(Poly::from_coeffs(vec![int(1), int(1)]));
    Poly::from_coeffs(vec![rad.neg(), RatFunc::zero(), RatFunc::one()])
}
