//! Action on isomorphisms of the base: coefficients of every polynomial and
//! series are mapped, t is fixed, and each root goes to the corresponding
//! root of the image polynomial.

use crate::diagrams::{field_sym, Code, DiagramError, Emitter};
use crate::exact_algebra::Field;
use crate::fd_fields::Tower;
use crate::grp2fld::Located;

use super::emit::HenselEmitter;

/// Check that `f` respects every committed operation fact of the base of
/// `src`. Returns the number of facts checked.
pub fn check_base_map<T: Tower>(
    src: &HenselEmitter<T>,
    f: &dyn Fn(&T::Elem) -> T::Elem,
) -> Result<usize, DiagramError> {
    let inner = src.inner();
    let el = |c: Code| inner.element(c).expect("committed code");
    let mut checked = 0;
    for ev in inner.diagram().events() {
        let fact = &ev.fact;
        let (lhs, rhs, what) = match (fact.sym, fact.args.as_slice()) {
            (field_sym::ZERO, []) => (f(el(fact.res)), T::Elem::zero(), "0".to_string()),
            (field_sym::ONE, []) => (f(el(fact.res)), T::Elem::one(), "1".to_string()),
            (sym, &[a, b]) => {
                let (x, y) = (f(el(a)), f(el(b)));
                let r = match sym {
                    field_sym::ADD => x.add(&y),
                    field_sym::SUB => x.sub(&y),
                    _ => x.mul(&y),
                };
                (f(el(fact.res)), r, format!("fact on {a}, {b}"))
            }
            _ => continue,
        };
        if lhs != rhs {
            return Err(DiagramError::MorphismViolation(format!(
                "base map breaks {what}"
            )));
        }
        checked += 1;
    }
    Ok(checked)
}

pub struct HenselMorphism<F> {
    f: F,
}

/// The induced map on henselizations, after checking `f` on the committed
/// base prefix of `src`.
pub fn hensel_morphism<T: Tower, F: Fn(&T::Elem) -> T::Elem>(
    src: &HenselEmitter<T>,
    f: F,
) -> Result<HenselMorphism<F>, DiagramError> {
    check_base_map(src, &f)?;
    Ok(HenselMorphism { f })
}

impl<F> HenselMorphism<F> {
    /// Code in `dst` of the image of element `c` of `src`; `Absent` while
    /// the image has no code yet.
    pub fn image<T: Tower, U: Tower<Elem = T::Elem>>(
        &self,
        src: &HenselEmitter<T>,
        dst: &HenselEmitter<U>,
        c: Code,
    ) -> Located
    where
        F: Fn(&T::Elem) -> T::Elem,
    {
        match src.element(c) {
            Some(x) => dst
                .locate(&x.map_base(&self.f))
                .map_or(Located::Absent, Located::Found),
            None => Located::Unknown,
        }
    }

    /// Images of codes below `n` that already exist in `dst`.
    pub fn images<T: Tower, U: Tower<Elem = T::Elem>>(
        &self,
        src: &HenselEmitter<T>,
        dst: &HenselEmitter<U>,
        n: Code,
    ) -> Vec<Option<Code>>
    where
        F: Fn(&T::Elem) -> T::Elem,
    {
        (0..n.min(src.elements().len() as Code))
            .map(|c| match self.image(src, dst, c) {
                Located::Found(d) => Some(d),
                _ => None,
            })
            .collect()
    }
}

/// Number of committed operation facts of `src` among codes with images
/// whose image fact is also committed in `dst`; errors on a mismatch.
pub fn check_facts_commute<T: Tower>(
    src: &HenselEmitter<T>,
    dst: &impl Emitter,
    images: &[Option<Code>],
    limit: usize,
) -> Result<usize, DiagramError> {
    let mut checked = 0;
    for ev in src
        .diagram()
        .events()
        .iter()
        .filter(|e| e.fact.args.len() == 2)
        .take(limit)
    {
        let fact = &ev.fact;
        let img = |c: Code| images.get(c as usize).copied().flatten();
        let (Some(a), Some(b), Some(r)) = (img(fact.args[0]), img(fact.args[1]), img(fact.res))
        else {
            continue;
        };
        if let Some(got) = dst.diagram().op(fact.sym, &[a, b]) {
            if got != r {
                return Err(DiagramError::MorphismViolation(format!(
                    "fact {:?} maps to {r}, target has {got}",
                    fact.args
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
