//! The diagram of F(t)^h: constants of F, then t, simple-residue-root lifts
//! of an enumeration of monic polynomials, and closure under the field
//! operations. Codes are assigned by first appearance, with equality decided
//! by `helem_eq`.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::diagrams::{
    cantor_unpair, field_sym, Code, Diagram, DiagramError, Emitter, Fact, Signature,
};
use crate::exact_algebra::{Field, Poly, RatFunc};
use crate::fd_fields::{Tower, TowerEmitter};

use super::element::{helem_eq, HenselElement};

#[derive(Debug, Clone, Copy)]
pub struct HenselConfig {
    pub pairs_per_stage: usize,
    pub inverses_per_stage: usize,
    /// (polynomial, residue root) pairs examined per stage.
    pub lift_checks_per_stage: usize,
    pub max_poly_degree: usize,
    /// Series terms below t^key_precision form the bucket key.
    pub key_precision: i64,
}

impl Default for HenselConfig {
    fn default() -> Self {
        HenselConfig {
            pairs_per_stage: 2,
            inverses_per_stage: 1,
            lift_checks_per_stage: 24,
            max_poly_degree: 3,
            key_precision: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftRecord {
    pub stage: u64,
    pub poly: String,
    pub root: String,
    pub code: Code,
}

/// Monic polynomials Y^d + sum (b_k0 + b_k1 t) Y^k with coefficient codes
/// b taken from the base field. Level h uses codes below h with at least
/// one equal to h - 1; inside a level, by degree, then odometer order.
struct PolyList {
    max_degree: usize,
    level: usize,
    list: Vec<(usize, Vec<Code>)>,
}

impl PolyList {
    fn get(&mut self, i: usize, base_len: usize) -> Option<&(usize, Vec<Code>)> {
        while self.list.len() <= i {
            let h = self.level + 1;
            if h > base_len {
                return None;
            }
            self.level = h;
            for d in 1..=self.max_degree.min(h) {
                let n = 2 * d;
                let mut t = vec![0 as Code; n];
                loop {
                    if t.iter().any(|&c| c as usize == h - 1) {
                        self.list.push((d, t.clone()));
                    }
                    let mut k = 0;
                    while k < n && t[k] as usize == h - 1 {
                        t[k] = 0;
                        k += 1;
                    }
                    if k == n {
                        break;
                    }
                    t[k] += 1;
                }
            }
        }
        self.list.get(i)
    }
}

pub struct HenselEmitter<T: Tower> {
    inner: TowerEmitter<T>,
    config: HenselConfig,
    diagram: Diagram,
    stage: u64,
    reps: Vec<HenselElement<T::Elem>>,
    buckets: HashMap<u64, Vec<Code>>,
    header: String,
    base_seen: usize,
    t_code: Option<Code>,
    polys: PolyList,
    lift_cursor: u128,
    pair_cursor: u128,
    inv_cursor: usize,
    lifts: Vec<LiftRecord>,
}

impl<T: Tower> HenselEmitter<T> {
    pub fn new(inner: TowerEmitter<T>, config: HenselConfig) -> Self {
        let header = inner.tower().header();
        HenselEmitter {
            inner,
            config,
            diagram: Diagram::new(Signature::field()),
            stage: 0,
            reps: Vec::new(),
            buckets: HashMap::new(),
            header,
            base_seen: 0,
            t_code: None,
            polys: PolyList {
                max_degree: config.max_poly_degree,
                level: 0,
                list: Vec::new(),
            },
            lift_cursor: 0,
            pair_cursor: 0,
            inv_cursor: 0,
            lifts: Vec::new(),
        }
    }

    pub fn with_defaults(tower: T) -> Self {
        Self::new(TowerEmitter::with_defaults(tower), HenselConfig::default())
    }

    pub fn inner(&self) -> &TowerEmitter<T> {
        &self.inner
    }

    pub fn element(&self, c: Code) -> Option<&HenselElement<T::Elem>> {
        self.reps.get(c as usize)
    }

    pub fn elements(&self) -> &[HenselElement<T::Elem>] {
        &self.reps
    }

    pub fn t_code(&self) -> Option<Code> {
        self.t_code
    }

    pub fn lifts(&self) -> &[LiftRecord] {
        &self.lifts
    }

    fn key(&self, x: &HenselElement<T::Elem>) -> u64 {
        let k = self.config.key_precision;
        let s = x.series(k);
        let mut h = DefaultHasher::new();
        for (e, a) in s.terms() {
            e.hash(&mut h);
            self.inner.tower().key(a).hash(&mut h);
        }
        h.finish()
    }

    /// Code of an element equal to `x`, if any.
    pub fn locate(&self, x: &HenselElement<T::Elem>) -> Option<Code> {
        let k = self.key(x);
        self.buckets
            .get(&k)?
            .iter()
            .copied()
            .find(|&c| helem_eq(&self.reps[c as usize], x))
    }

    fn intern(&mut self, x: HenselElement<T::Elem>) -> Code {
        let k = self.key(&x);
        if let Some(v) = self.buckets.get(&k) {
            if let Some(&c) = v.iter().find(|&&c| helem_eq(&self.reps[c as usize], &x)) {
                return c;
            }
        }
        let c = self.reps.len() as Code;
        self.reps.push(x);
        self.buckets.entry(k).or_default().push(c);
        c
    }

    fn rebuild_buckets(&mut self) {
        let keys: Vec<u64> = self.reps.iter().map(|x| self.key(x)).collect();
        self.buckets.clear();
        for (c, k) in keys.into_iter().enumerate() {
            self.buckets.entry(k).or_default().push(c as Code);
        }
    }

    fn base_poly(&self, d: usize, codes: &[Code]) -> Poly<RatFunc<T::Elem>> {
        let b = |c: Code| self.inner.element(c).expect("available").clone();
        let mut c: Vec<RatFunc<T::Elem>> = (0..d)
            .map(|k| {
                RatFunc::from_poly(Poly::from_coeffs(vec![
                    b(codes[2 * k]),
                    b(codes[2 * k + 1]),
                ]))
            })
            .collect();
        c.push(RatFunc::one());
        Poly::from_coeffs(c)
    }

    fn try_lifts(&mut self, s: u64) {
        let base_len = self.inner.elements().len();
        for _ in 0..self.config.lift_checks_per_stage {
            let (i, j) = cantor_unpair(self.lift_cursor);
            if j as usize >= base_len {
                break;
            }
            let Some((d, codes)) = self.polys.get(i as usize, base_len).cloned() else {
                break;
            };
            self.lift_cursor += 1;
            let f = self.base_poly(d, &codes);
            let a = self.inner.element(j as Code).expect("available").clone();
            let Ok(x) = HenselElement::lift(&f, &a) else {
                continue;
            };
            if x.exact().is_some() {
                self.intern(x);
                continue;
            }
            let n = self.reps.len();
            let c = self.intern(x);
            if c as usize == n {
                let poly = self.reps[c as usize]
                    .poly()
                    .coeffs()
                    .iter()
                    .map(|r| r.render_var("t"))
                    .collect::<Vec<_>>()
                    .join(", ");
                self.lifts.push(LiftRecord {
                    stage: s,
                    poly: format!("[{poly}]"),
                    root: self.inner.tower().render(&a),
                    code: c,
                });
                break;
            }
        }
    }
}

impl<T: Tower> Emitter for HenselEmitter<T> {
    fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    fn stage(&self) -> u64 {
        self.stage
    }

    fn step(&mut self) -> Result<(), DiagramError> {
        let s = self.stage;
        self.inner.step()?;
        let header = self.inner.tower().header();
        if header != self.header {
            self.header = header;
            self.rebuild_buckets();
        }
        if s == 0 {
            let z = self.intern(HenselElement::constant(T::Elem::zero()));
            let o = self.intern(HenselElement::constant(T::Elem::one()));
            self.diagram
                .commit(s, Fact::new(field_sym::ZERO, vec![], z))?;
            self.diagram
                .commit(s, Fact::new(field_sym::ONE, vec![], o))?;
        }
        while self.base_seen < self.inner.elements().len() {
            let a = self.inner.elements()[self.base_seen].clone();
            self.intern(HenselElement::constant(a));
            self.base_seen += 1;
        }
        if self.t_code.is_none() {
            self.t_code = Some(self.intern(HenselElement::t()));
        }
        self.try_lifts(s);
        for _ in 0..self.config.inverses_per_stage {
            let Some(x) = self.reps.get(self.inv_cursor) else {
                break;
            };
            if let Some(y) = x.inv() {
                self.intern(y);
            }
            self.inv_cursor += 1;
        }
        for _ in 0..self.config.pairs_per_stage {
            let (a, b) = cantor_unpair(self.pair_cursor);
            let n = self.reps.len() as u128;
            if a >= n || b >= n {
                break;
            }
            let (x, y) = (&self.reps[a as usize], &self.reps[b as usize]);
            let results = [
                (field_sym::ADD, x.add(y)),
                (field_sym::SUB, x.sub(y)),
                (field_sym::MUL, x.mul(y)),
            ];
            let args = vec![a as Code, b as Code];
            for (sym, r) in results {
                let c = self.intern(r);
                self.diagram.commit(s, Fact::new(sym, args.clone(), c))?;
            }
            self.pair_cursor += 1;
        }
        self.stage += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::{int, Rational};
    use crate::fd_fields::CycloTower;
    use crate::hensel::element::TAdicValue;
    use crate::hensel::residue_check;

    fn rf(c: &[i64]) -> RatFunc<Rational> {
        RatFunc::from_poly(Poly::from_ints(c))
    }

    #[test]
    fn rational_base() {
        let mut h = HenselEmitter::with_defaults(CycloTower::fixed(1).unwrap());
        h.run_to(120).unwrap();
        let to_q = |r: &RatFunc<Rational>| {
            HenselElement::from_ratfunc(r.map(|q| crate::exact_algebra::Cyclo::rational(q.clone())))
        };
        let one_plus_t = to_q(&rf(&[1, 1]));
        let t = to_q(&rf(&[0, 1]));
        let squares: Vec<_> = h.elements().iter().map(|x| x.mul(x)).collect();
        assert!(
            squares.iter().any(|s| helem_eq(s, &one_plus_t)),
            "sqrt(1 + t) present"
        );
        assert!(!squares.iter().any(|s| helem_eq(s, &t)), "sqrt(t) absent");
        // x + 0 = x on committed facts
        let zero = h.diagram().op(field_sym::ZERO, &[]).unwrap();
        for ev in h.diagram().events() {
            if ev.fact.sym == field_sym::ADD && ev.fact.args[1] == zero {
                assert_eq!(ev.fact.res, ev.fact.args[0]);
            }
        }
        // value group Z: 1/t is present with valuation -1
        let t_inv = t.inv().unwrap();
        let c = h.locate(&t_inv).expect("1/t committed");
        assert_eq!(h.element(c).unwrap().valuation(), TAdicValue::Finite(-1));
        let r = residue_check(&h);
        assert!(
            r.ok() && r.facts_checked > 100 && r.outside_base == 0,
            "{r:?}"
        );
        let _ = int(0);
    }

    #[test]
    fn codes_are_distinct_and_facts_consistent() {
        let mut h = HenselEmitter::with_defaults(CycloTower::fixed(3).unwrap());
        h.run_to(60).unwrap();
        let xs = h.elements();
        for i in 0..xs.len().min(80) {
            for j in 0..i {
                assert!(!helem_eq(&xs[i], &xs[j]), "codes {i} and {j}");
            }
        }
        for ev in h.diagram().events() {
            let [a, b] = ev.fact.args[..] else { continue };
            let (x, y) = (&xs[a as usize], &xs[b as usize]);
            let r = match ev.fact.sym {
                field_sym::ADD => x.add(y),
                field_sym::SUB => x.sub(y),
                _ => x.mul(y),
            };
            assert!(helem_eq(&r, &xs[ev.fact.res as usize]));
        }
        assert!(residue_check(&h).ok());
    }
}
