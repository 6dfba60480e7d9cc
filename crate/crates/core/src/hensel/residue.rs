//! Residue field recovery: the constant term on elements of valuation >= 0.

use serde::Serialize;

use crate::diagrams::{field_sym, Code, Emitter};
use crate::exact_algebra::Field;
use crate::fd_fields::Tower;

use super::element::TAdicValue;
use super::emit::HenselEmitter;

#[derive(Debug, Clone, Default, Serialize)]
pub struct ResidueReport {
    pub elements: usize,
    /// Elements of valuation >= 0.
    pub integral: usize,
    /// Committed facts among integral elements respected by the residue map.
    pub facts_checked: usize,
    /// Base generators met as residues of constants.
    pub generators_hit: usize,
    pub generators: usize,
    /// Residues that are not elements of the base diagram.
    pub outside_base: usize,
    pub min_valuation: Option<i64>,
    pub max_valuation: Option<i64>,
    pub violations: Vec<String>,
}

impl ResidueReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.generators_hit == self.generators
    }
}

/// Residue of a committed element; `None` for negative valuation.
pub fn residue<T: Tower>(h: &HenselEmitter<T>, c: Code) -> Option<T::Elem> {
    h.element(c)?.residue()
}

/// Check that the residue map is a ring homomorphism onto the base on the
/// committed prefix: facts among integral elements, constants mapping to
/// themselves, generators reached, residues lying in the base.
pub fn residue_check<T: Tower>(h: &HenselEmitter<T>) -> ResidueReport {
    let n = h.elements().len();
    let vals: Vec<TAdicValue> = h.elements().iter().map(|x| x.valuation()).collect();
    let res: Vec<Option<T::Elem>> = h.elements().iter().map(|x| x.residue()).collect();
    let mut r = ResidueReport {
        elements: n,
        ..Default::default()
    };
    for v in vals.iter().filter_map(|v| v.finite()) {
        r.min_valuation = Some(r.min_valuation.map_or(v, |m| m.min(v)));
        r.max_valuation = Some(r.max_valuation.map_or(v, |m| m.max(v)));
    }
    r.integral = res.iter().filter(|x| x.is_some()).count();
    r.outside_base = res
        .iter()
        .flatten()
        .filter(|x| h.inner().code_of(x).is_none())
        .count();
    for ev in h.diagram().events() {
        let f = &ev.fact;
        let [a, b] = f.args[..] else { continue };
        let (Some(x), Some(y), Some(z)) =
            (&res[a as usize], &res[b as usize], &res[f.res as usize])
        else {
            continue;
        };
        let want = match f.sym {
            field_sym::ADD => x.add(y),
            field_sym::SUB => x.sub(y),
            _ => x.mul(y),
        };
        if &want != z {
            r.violations
                .push(format!("residues of {a}, {b} -> {}", f.res));
        }
        r.facts_checked += 1;
    }
    let gens = h.inner().tower().generators();
    r.generators = gens.len() + 1;
    // 1 and each generator are residues of their own constants
    for g in std::iter::once(T::Elem::one()).chain(gens) {
        let hit = h.elements().iter().zip(&res).any(|(x, rx)| {
            x.exact().and_then(|q| q.as_constant()).as_ref() == Some(&g) && rx.as_ref() == Some(&g)
        });
        if hit {
            r.generators_hit += 1;
        }
    }
    r
}
