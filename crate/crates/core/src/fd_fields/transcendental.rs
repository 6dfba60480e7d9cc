//! A(t) from the diagram of A: rational functions whose coefficients are
//! element codes of A, computed through A's committed facts.

use std::collections::{HashMap, VecDeque};

use crate::diagrams::{
    cantor_unpair, field_sym, Code, Diagram, DiagramError, Emitter, Fact, Signature,
};

use super::view::FieldView;

/// Polynomial over A: coefficient codes, low first, no trailing zero code.
pub type CodePoly = Vec<Code>;

/// num/den with den monic and gcd(num, den) = 1; zero is []/[1].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeFrac {
    pub num: CodePoly,
    pub den: CodePoly,
}

fn trim(v: &FieldView, mut p: CodePoly) -> Option<CodePoly> {
    let z = v.zero()?;
    while p.last() == Some(&z) {
        p.pop();
    }
    Some(p)
}

fn coeff(v: &FieldView, p: &[Code], i: usize) -> Option<Code> {
    p.get(i).copied().or_else(|| v.zero())
}

pub fn padd(v: &FieldView, p: &[Code], q: &[Code]) -> Option<CodePoly> {
    let n = p.len().max(q.len());
    let out = (0..n)
        .map(|i| v.add(coeff(v, p, i)?, coeff(v, q, i)?))
        .collect::<Option<Vec<_>>>()?;
    trim(v, out)
}

pub fn psub(v: &FieldView, p: &[Code], q: &[Code]) -> Option<CodePoly> {
    let n = p.len().max(q.len());
    let out = (0..n)
        .map(|i| v.sub(coeff(v, p, i)?, coeff(v, q, i)?))
        .collect::<Option<Vec<_>>>()?;
    trim(v, out)
}

pub fn pmul(v: &FieldView, p: &[Code], q: &[Code]) -> Option<CodePoly> {
    if p.is_empty() || q.is_empty() {
        return Some(vec![]);
    }
    let mut out = vec![v.zero()?; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] = v.add(out[i + j], v.mul(a, b)?)?;
        }
    }
    trim(v, out)
}

fn pscale(v: &FieldView, p: &[Code], a: Code) -> Option<CodePoly> {
    let out = p.iter().map(|&c| v.mul(c, a)).collect::<Option<Vec<_>>>()?;
    trim(v, out)
}

pub fn pdivrem(v: &FieldView, p: &[Code], d: &[Code]) -> Option<(CodePoly, CodePoly)> {
    let inv = v.inv(*d.last()?)?;
    let mut r = p.to_vec();
    let mut q = vec![v.zero()?; p.len().saturating_sub(d.len()) + 1];
    while r.len() >= d.len() {
        let k = r.len() - d.len();
        let c = v.mul(*r.last()?, inv)?;
        q[k] = c;
        for (i, &b) in d.iter().enumerate() {
            r[k + i] = v.sub(r[k + i], v.mul(c, b)?)?;
        }
        // the leading term cancels exactly
        r.pop();
        r = trim(v, r)?;
    }
    Some((trim(v, q)?, r))
}

fn monic(v: &FieldView, p: &[Code]) -> Option<CodePoly> {
    let inv = v.inv(*p.last()?)?;
    pscale(v, p, inv)
}

pub fn pgcd(v: &FieldView, p: &[Code], q: &[Code]) -> Option<CodePoly> {
    let (mut a, mut b) = (p.to_vec(), q.to_vec());
    while !b.is_empty() {
        let (_, r) = pdivrem(v, &a, &b)?;
        a = b;
        b = r;
    }
    if a.is_empty() {
        return Some(a);
    }
    monic(v, &a)
}

pub fn normalize(v: &FieldView, num: &[Code], den: &[Code]) -> Option<CodeFrac> {
    if den.is_empty() {
        return None;
    }
    let one = v.one()?;
    if num.is_empty() {
        return Some(CodeFrac {
            num: vec![],
            den: vec![one],
        });
    }
    let g = pgcd(v, num, den)?;
    let (n, _) = pdivrem(v, num, &g)?;
    let (d, _) = pdivrem(v, den, &g)?;
    let inv = v.inv(*d.last()?)?;
    Some(CodeFrac {
        num: pscale(v, &n, inv)?,
        den: pscale(v, &d, inv)?,
    })
}

fn frac_op(v: &FieldView, sym: u32, x: &CodeFrac, y: &CodeFrac) -> Option<CodeFrac> {
    match sym {
        field_sym::MUL => normalize(v, &pmul(v, &x.num, &y.num)?, &pmul(v, &x.den, &y.den)?),
        _ => {
            let a = pmul(v, &x.num, &y.den)?;
            let b = pmul(v, &y.num, &x.den)?;
            let n = if sym == field_sym::ADD {
                padd(v, &a, &b)?
            } else {
                psub(v, &a, &b)?
            };
            normalize(v, &n, &pmul(v, &x.den, &y.den)?)
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TranscendentalConfig {
    pub inner_steps_per_stage: usize,
    pub pairs_per_stage: usize,
    pub retries_per_stage: usize,
    pub constants_per_stage: usize,
}

impl Default for TranscendentalConfig {
    fn default() -> Self {
        TranscendentalConfig {
            inner_steps_per_stage: 2,
            pairs_per_stage: 4,
            retries_per_stage: 4,
            constants_per_stage: 2,
        }
    }
}

/// Emits A(t). Codes go to 0, 1, t, then the constants of A and the closure
/// under inverses and operations. An operation whose value needs an
/// uncommitted fact of A waits in a retry queue.
pub struct PureTranscendental<E: Emitter> {
    inner: E,
    config: TranscendentalConfig,
    out: Output,
    stage: u64,
    inverses: HashMap<Code, Code>,
    const_cursor: Code,
    inv_cursor: usize,
    inv_retry: VecDeque<usize>,
    pair_cursor: u128,
    retry: VecDeque<(Code, Code)>,
}

impl<E: Emitter> PureTranscendental<E> {
    pub fn new(inner: E, config: TranscendentalConfig) -> Self {
        PureTranscendental {
            inner,
            config,
            out: Output {
                diagram: Diagram::new(Signature::field()),
                elems: Vec::new(),
                codes: HashMap::new(),
            },
            stage: 0,
            inverses: HashMap::new(),
            const_cursor: 0,
            inv_cursor: 0,
            inv_retry: VecDeque::new(),
            pair_cursor: 0,
            retry: VecDeque::new(),
        }
    }

    pub fn with_defaults(inner: E) -> Self {
        Self::new(inner, TranscendentalConfig::default())
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn element(&self, c: Code) -> Option<&CodeFrac> {
        self.out.elems.get(c as usize)
    }

    pub fn elements(&self) -> &[CodeFrac] {
        &self.out.elems
    }

    pub fn code_of(&self, x: &CodeFrac) -> Option<Code> {
        self.out.codes.get(x).copied()
    }

    /// Code of num/den after normalization through A's facts, if present.
    pub fn code_of_fraction(&self, num: &[Code], den: &[Code]) -> Option<Code> {
        let v = FieldView::with_inverses(self.inner.diagram(), u64::MAX, self.inverses.clone());
        let f = normalize(&v, num, den)?;
        self.code_of(&f)
    }

    pub fn t_code(&self) -> Option<Code> {
        self.out.elems.get(2).map(|_| 2)
    }
}

struct Output {
    diagram: Diagram,
    elems: Vec<CodeFrac>,
    codes: HashMap<CodeFrac, Code>,
}

impl Output {
    fn intern(&mut self, x: CodeFrac) -> Code {
        if let Some(&c) = self.codes.get(&x) {
            return c;
        }
        let c = self.elems.len() as Code;
        self.codes.insert(x.clone(), c);
        self.elems.push(x);
        c
    }

    /// Commit the three facts for (a, b); false if A has not committed enough yet.
    fn try_pair(&mut self, v: &FieldView, a: Code, b: Code, s: u64) -> Result<bool, DiagramError> {
        let (x, y) = (
            self.elems[a as usize].clone(),
            self.elems[b as usize].clone(),
        );
        let mut results = Vec::with_capacity(3);
        for sym in [field_sym::ADD, field_sym::SUB, field_sym::MUL] {
            match frac_op(v, sym, &x, &y) {
                Some(r) => results.push((sym, r)),
                None => return Ok(false),
            }
        }
        for (sym, r) in results {
            let c = self.intern(r);
            self.diagram.commit(s, Fact::new(sym, vec![a, b], c))?;
        }
        Ok(true)
    }
}

impl<E: Emitter> Emitter for PureTranscendental<E> {
    fn diagram(&self) -> &Diagram {
        &self.out.diagram
    }

    fn stage(&self) -> u64 {
        self.stage
    }

    fn step(&mut self) -> Result<(), DiagramError> {
        for _ in 0..self.config.inner_steps_per_stage {
            self.inner.step()?;
        }
        let s = self.stage;
        let a = self.inner.diagram();
        let v = FieldView::with_inverses(a, u64::MAX, std::mem::take(&mut self.inverses));
        let out = &mut self.out;
        if out.elems.is_empty() {
            let (Some(z), Some(o)) = (v.zero(), v.one()) else {
                self.inverses = v.into_inverses();
                self.stage += 1;
                return Ok(());
            };
            let zero = out.intern(CodeFrac {
                num: vec![],
                den: vec![o],
            });
            let one = out.intern(CodeFrac {
                num: vec![o],
                den: vec![o],
            });
            out.intern(CodeFrac {
                num: vec![z, o],
                den: vec![o],
            });
            out.diagram
                .commit(s, Fact::new(field_sym::ZERO, vec![], zero))?;
            out.diagram
                .commit(s, Fact::new(field_sym::ONE, vec![], one))?;
        }
        let one = v.one().expect("committed");
        for _ in 0..self.config.constants_per_stage {
            if self.const_cursor >= a.size() {
                break;
            }
            let c = self.const_cursor;
            let num = if Some(c) == v.zero() { vec![] } else { vec![c] };
            out.intern(CodeFrac {
                num,
                den: vec![one],
            });
            self.const_cursor += 1;
        }
        let mut pending = Vec::new();
        for _ in 0..self.config.retries_per_stage.min(self.inv_retry.len()) {
            pending.push(self.inv_retry.pop_front().expect("nonempty"));
        }
        for _ in 0..self.config.retries_per_stage {
            if self.inv_cursor >= out.elems.len() {
                break;
            }
            pending.push(self.inv_cursor);
            self.inv_cursor += 1;
        }
        for i in pending {
            let x = out.elems[i].clone();
            if x.num.is_empty() {
                continue;
            }
            match normalize(&v, &x.den, &x.num) {
                Some(y) => {
                    out.intern(y);
                }
                None => self.inv_retry.push_back(i),
            }
        }
        for _ in 0..self.config.retries_per_stage.min(self.retry.len()) {
            let (x, y) = self.retry.pop_front().expect("nonempty");
            if !out.try_pair(&v, x, y, s)? {
                self.retry.push_back((x, y));
            }
        }
        for _ in 0..self.config.pairs_per_stage {
            let (x, y) = cantor_unpair(self.pair_cursor);
            let n = out.elems.len() as u128;
            if x >= n || y >= n {
                break;
            }
            self.pair_cursor += 1;
            if !out.try_pair(&v, x as Code, y as Code, s)? {
                self.retry.push_back((x as Code, y as Code));
            }
        }
        self.inverses = v.into_inverses();
        self.stage += 1;
        Ok(())
    }
}

/// Image of an element of A(t) under an isomorphism g of the coefficient
/// fields extended by t -> t'.
pub fn map_frac(x: &CodeFrac, g: impl Fn(Code) -> Code) -> CodeFrac {
    CodeFrac {
        num: x.num.iter().map(|&c| g(c)).collect(),
        den: x.den.iter().map(|&c| g(c)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{audit, Relabel, Relabeled};
    use crate::fd_fields::cyclotomic::{cyclo_emitter, CycloTower};
    use crate::fd_fields::rootset::int_poly;

    #[test]
    fn rational_function_field_over_q() {
        let mut k = PureTranscendental::with_defaults(cyclo_emitter(CycloTower::fixed(1).unwrap()));
        k.run_to(400).unwrap();
        assert!(audit(k.diagram()).clean());
        let out = FieldView::latest(k.diagram());
        let t = k.t_code().unwrap();
        let zero = out.zero().unwrap();
        for n in 0..60 {
            assert_ne!(out.eval_int_poly(&int_poly(n), t), Some(zero));
        }
        // (t^2 + 1)/(t^2 + 1) is 1
        let a = FieldView::latest(k.inner().diagram());
        let (z, o) = (a.zero().unwrap(), a.one().unwrap());
        let p = vec![o, z, o];
        assert_eq!(k.code_of_fraction(&p, &p), out.one());
        let tt = out.mul(t, t).unwrap();
        assert_eq!(
            k.element(tt).unwrap(),
            &CodeFrac {
                num: vec![z, z, o],
                den: vec![o]
            }
        );
    }

    #[test]
    fn isomorphic_inputs_give_isomorphic_outputs() {
        let r = Relabel::new(11, 8);
        let mut k1 =
            PureTranscendental::with_defaults(cyclo_emitter(CycloTower::fixed(3).unwrap()));
        let mut k2 = PureTranscendental::with_defaults(Relabeled::new(
            cyclo_emitter(CycloTower::fixed(3).unwrap()),
            r,
        ));
        k1.run_to(300).unwrap();
        k2.run_to(600).unwrap();
        let image = |c: Code| k2.code_of(&map_frac(k1.element(c).unwrap(), |a| r.apply(a)));
        let mut checked = 0;
        for e in k1.diagram().events().iter().take(200) {
            let args: Option<Vec<Code>> = e.fact.args.iter().map(|&a| image(a)).collect();
            if let (Some(args), Some(res)) = (args, image(e.fact.res)) {
                if let Some(r2) = k2.diagram().op(e.fact.sym, &args) {
                    assert_eq!(r2, res);
                    checked += 1;
                }
            }
        }
        assert!(checked > 50, "only {checked} facts comparable");
    }
}
