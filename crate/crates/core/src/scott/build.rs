//! Scott sentences of groups in TFAb_r and fields in FD_r, built from a
//! basis and the set S of facts about it committed so far.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::diagrams::{Code, Diagram};
use crate::fd_fields::FieldView;
use crate::tfab::{independence_check, GroupView, Independence};

use super::sentence::{integer_polynomial, Atom, Family, Gen, InfSentence, Node, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScottError {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
}

const A: Var = 100;
const B: Var = 101;
const C: Var = 102;

fn v(x: Var) -> Term {
    Term::Var(x)
}

fn eq(lhs: Term, rhs: Term) -> Node {
    Node::Atom(Atom { lhs, rhs, eq: true })
}

fn neq(lhs: Term, rhs: Term) -> Node {
    Node::Atom(Atom {
        lhs,
        rhs,
        eq: false,
    })
}

fn forall(vars: &[Var], body: Node) -> Node {
    Node::Forall {
        vars: vars.to_vec(),
        body: Box::new(body),
    }
}

fn exists(vars: &[Var], body: Node) -> Node {
    if vars.is_empty() {
        return body;
    }
    Node::Exists {
        vars: vars.to_vec(),
        body: Box::new(body),
    }
}

/// Torsion-free abelian group axioms.
pub fn group_axioms() -> Vec<Node> {
    vec![
        forall(&[A, B], eq(Term::add(v(A), v(B)), Term::add(v(B), v(A)))),
        forall(
            &[A, B, C],
            eq(
                Term::add(Term::add(v(A), v(B)), v(C)),
                Term::add(v(A), Term::add(v(B), v(C))),
            ),
        ),
        forall(&[A], eq(Term::add(v(A), Term::Zero), v(A))),
        forall(&[A], eq(Term::add(v(A), Term::neg(v(A))), Term::Zero)),
        Node::CountableAnd(Gen {
            label: "torsion_free".into(),
            family: Family::TorsionFree(A),
        }),
    ]
}

/// Field axioms in characteristic 0.
pub fn field_axioms() -> Vec<Node> {
    let (a, b, c) = (v(A), v(B), v(C));
    vec![
        neq(Term::Zero, Term::One),
        forall(
            &[A, B],
            eq(
                Term::add(a.clone(), b.clone()),
                Term::add(b.clone(), a.clone()),
            ),
        ),
        forall(
            &[A, B],
            eq(
                Term::mul(a.clone(), b.clone()),
                Term::mul(b.clone(), a.clone()),
            ),
        ),
        forall(
            &[A, B, C],
            eq(
                Term::add(Term::add(a.clone(), b.clone()), c.clone()),
                Term::add(a.clone(), Term::add(b.clone(), c.clone())),
            ),
        ),
        forall(
            &[A, B, C],
            eq(
                Term::mul(Term::mul(a.clone(), b.clone()), c.clone()),
                Term::mul(a.clone(), Term::mul(b.clone(), c.clone())),
            ),
        ),
        forall(
            &[A, B, C],
            eq(
                Term::mul(a.clone(), Term::add(b.clone(), c.clone())),
                Term::add(
                    Term::mul(a.clone(), b.clone()),
                    Term::mul(a.clone(), c.clone()),
                ),
            ),
        ),
        forall(&[A], eq(Term::add(a.clone(), Term::Zero), a.clone())),
        forall(&[A], eq(Term::mul(a.clone(), Term::One), a.clone())),
        forall(
            &[A, B],
            eq(
                Term::add(Term::sub(a.clone(), b.clone()), b.clone()),
                a.clone(),
            ),
        ),
        forall(
            &[A],
            Node::Or {
                children: vec![
                    eq(a.clone(), Term::Zero),
                    exists(&[B], eq(Term::mul(a.clone(), b.clone()), Term::One)),
                ],
            },
        ),
        Node::CountableAnd(Gen {
            label: "char_zero".into(),
            family: Family::CharZero,
        }),
    ]
}

/// The template: axioms and, for some tuple x, independence, every member
/// of S realized, and every y realizing some member of S.
fn template(
    structure: String,
    basis: &[Code],
    stage: u64,
    axioms: Vec<Node>,
    indep: Option<Family>,
    presence: Vec<Node>,
    closure: Vec<Node>,
) -> InfSentence {
    let r = basis.len() as Var;
    let xs: Vec<Var> = (0..r).collect();
    let mut body = Vec::new();
    if let Some(f) = indep {
        body.push(Node::CountableAnd(Gen {
            label: "independent".into(),
            family: f,
        }));
    }
    body.push(Node::CountableAnd(Gen::committed("S_present", presence)));
    body.push(forall(
        &[r],
        Node::CountableOr(Gen::committed("S_covers", closure)),
    ));
    let mut root = axioms;
    root.push(exists(&xs, Node::And { children: body }));
    InfSentence {
        structure,
        basis: basis.to_vec(),
        stage,
        root: Node::And { children: root },
    }
}

/// A clause m y = m_1 x_1 + ... + m_r x_r.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Lambda {
    pub m: i64,
    pub coeffs: Vec<i64>,
}

impl Lambda {
    fn normalized(m: i64, coeffs: Vec<i64>) -> Lambda {
        let g = coeffs.iter().fold(m, |g, &c| num_integer::gcd(g, c)).max(1);
        Lambda {
            m: m / g,
            coeffs: coeffs.iter().map(|c| c / g).collect(),
        }
    }

    fn atom(&self) -> Node {
        let r = self.coeffs.len() as Var;
        let terms: Vec<(i64, Var)> = self.coeffs.iter().copied().zip(0..r).collect();
        let lhs = if self.m == 1 {
            v(r)
        } else {
            Term::scale(self.m, v(r))
        };
        eq(lhs, Term::linear(&terms))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TfabConfig {
    /// Coefficients of lattice points m_1 a_1 + ... + m_r a_r, by rank 1, 2, 3+.
    pub coeff_bound: [i64; 3],
    /// Largest multiplier m tried; grows by one each stage from here.
    pub multiplier: i64,
    pub max_multiplier: i64,
    /// Pending elements examined per update.
    pub per_update: usize,
    /// Coefficient bound of the dependence search on the basis.
    pub check_bound: i64,
}

impl Default for TfabConfig {
    fn default() -> Self {
        TfabConfig {
            coeff_bound: [48, 6, 3],
            multiplier: 16,
            max_multiplier: 1024,
            per_update: 64,
            check_bound: 4,
        }
    }
}

/// Stagewise enumeration of S for a group: each element y gets the first
/// clause m y = lattice point found, in order of discovery.
pub struct TfabBuilder {
    basis: Vec<Code>,
    config: TfabConfig,
    s: Vec<Lambda>,
    seen: HashSet<Lambda>,
    lattice: HashMap<Code, Vec<i64>>,
    lattice_todo: Vec<Vec<i64>>,
    next: Code,
    pending: Vec<Code>,
    cursor: usize,
    stage: u64,
}

fn box_vectors(r: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut t = vec![-k; r];
    loop {
        out.push(t.clone());
        let Some(i) = (0..r).rev().find(|&i| t[i] < k) else {
            break;
        };
        t[i] += 1;
        for x in t.iter_mut().skip(i + 1) {
            *x = -k;
        }
    }
    out.sort_by_key(|v| v.iter().map(|x| x.abs()).max().unwrap_or(0));
    out
}

impl TfabBuilder {
    pub fn new(basis: &[Code], config: TfabConfig) -> Self {
        let r = basis.len();
        let k = config.coeff_bound[r.saturating_sub(1).min(2)];
        TfabBuilder {
            basis: basis.to_vec(),
            config,
            s: Vec::new(),
            seen: HashSet::new(),
            lattice: HashMap::new(),
            lattice_todo: box_vectors(r, k),
            next: 0,
            pending: Vec::new(),
            cursor: 0,
            stage: 0,
        }
    }

    pub fn lambdas(&self) -> &[Lambda] {
        &self.s
    }

    pub fn update(&mut self, d: &Diagram, stage: u64) -> Result<(), ScottError> {
        self.stage = stage;
        if let Independence::Dependent(c) =
            independence_check(d, &self.basis, stage, self.config.check_bound)
        {
            return Err(ScottError::InvalidBasis(format!(
                "relation {c:?} on {:?}",
                self.basis
            )));
        }
        let g = GroupView::new(d, stage);
        let basis = self.basis.clone();
        self.lattice_todo.retain(|c| match g.lincomb(c, &basis) {
            Some(code) => {
                self.lattice.entry(code).or_insert_with(|| c.clone());
                false
            }
            None => true,
        });
        let size = d.size_at(stage);
        while self.next < size {
            self.pending.push(self.next);
            self.next += 1;
        }
        let max_m = (self.config.multiplier + stage as i64).min(self.config.max_multiplier);
        let mut budget = self.config.per_update.min(self.pending.len());
        while budget > 0 && !self.pending.is_empty() {
            budget -= 1;
            if self.cursor >= self.pending.len() {
                self.cursor = 0;
            }
            let y = self.pending[self.cursor];
            let mut found = None;
            let mut acc = Some(y);
            for m in 1..=max_m {
                let Some(a) = acc else { break };
                if let Some(c) = self.lattice.get(&a) {
                    found = Some(Lambda::normalized(m, c.clone()));
                    break;
                }
                acc = g.add(a, y);
            }
            match found {
                Some(l) => {
                    self.pending.remove(self.cursor);
                    if self.seen.insert(l.clone()) {
                        self.s.push(l);
                    }
                }
                None => self.cursor += 1,
            }
        }
        Ok(())
    }

    pub fn sentence(&self) -> InfSentence {
        let r = self.basis.len() as Var;
        let atoms: Vec<Node> = self.s.iter().map(Lambda::atom).collect();
        let presence = atoms.iter().map(|a| exists(&[r], a.clone())).collect();
        let indep = (r > 0).then(|| Family::LinearIndependence((0..r).collect()));
        template(
            format!("TFAb_{r}"),
            &self.basis,
            self.stage,
            group_axioms(),
            indep,
            presence,
            atoms,
        )
    }
}

/// Scott sentence of a group from the facts committed by `stage`, with S
/// listed in order of discovery over stages 0..=stage.
pub fn scott_tfab(d: &Diagram, basis: &[Code], stage: u64) -> Result<InfSentence, ScottError> {
    scott_tfab_with(d, basis, stage, TfabConfig::default())
}

pub fn scott_tfab_with(
    d: &Diagram,
    basis: &[Code],
    stage: u64,
    config: TfabConfig,
) -> Result<InfSentence, ScottError> {
    let mut b = TfabBuilder::new(basis, config);
    for s in 0..=stage {
        b.update(d, s)?;
    }
    Ok(b.sentence())
}

/// Integer polynomial in x_1..x_r, y as (coefficient, exponents) terms; the
/// formula is "exists y P(x, y) = 0".
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PolyFormula {
    pub terms: Vec<(i64, Vec<u32>)>,
}

impl PolyFormula {
    /// Positive and negated negative parts, as terms.
    fn sides(&self) -> (Vec<(i64, Vec<(Var, u32)>)>, Vec<(i64, Vec<(Var, u32)>)>) {
        let mono = |e: &Vec<u32>| {
            e.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as Var, e))
                .collect()
        };
        let pos = self
            .terms
            .iter()
            .filter(|(c, _)| *c > 0)
            .map(|(c, e)| (*c, mono(e)))
            .collect();
        let neg = self
            .terms
            .iter()
            .filter(|(c, _)| *c < 0)
            .map(|(c, e)| (-c, mono(e)))
            .collect();
        (pos, neg)
    }

    /// P = 0 written as (positive part) = (negated negative part), which
    /// keeps intermediate values small.
    fn atom(&self) -> Node {
        let (pos, neg) = self.sides();
        eq(Term::poly(&pos), Term::poly(&neg))
    }

    /// Whether P vanishes at `point`, read the same way as [`Self::atom`].
    pub fn vanishes(&self, f: &FieldView, point: &[Code]) -> Option<bool> {
        let (pos, neg) = self.sides();
        Some(eval_poly(f, &pos, point)? == eval_poly(f, &neg, point)?)
    }

    pub fn term(&self) -> Term {
        let (pos, neg) = self.sides();
        Term::sub(Term::poly(&pos), Term::poly(&neg))
    }

    /// Largest exponent of a single variable or coefficient size.
    pub fn height(&self) -> u32 {
        let deg = self
            .terms
            .iter()
            .flat_map(|(_, e)| e.iter().copied())
            .max()
            .unwrap_or(0);
        let coef = self
            .terms
            .iter()
            .map(|(c, _)| c.unsigned_abs() as u32)
            .max()
            .unwrap_or(0);
        deg.max(coef)
    }
}

/// Value of `Term::poly(terms)` with variable i bound to point[i].
fn eval_poly(f: &FieldView, terms: &[(i64, Vec<(Var, u32)>)], point: &[Code]) -> Option<Code> {
    let mut acc: Option<Code> = None;
    for (c, mono) in terms {
        let mut m: Option<Code> = None;
        for &(v, e) in mono {
            for _ in 0..e {
                let x = point[v as usize];
                m = Some(match m {
                    None => x,
                    Some(a) => f.mul(a, x)?,
                });
            }
        }
        let t = match (m, *c) {
            (None, c) => f.int(c)?,
            (Some(m), 1) => m,
            (Some(m), c) => f.mul(f.int(c)?, m)?,
        };
        acc = Some(match acc {
            None => t,
            Some(a) => f.add(a, t)?,
        });
    }
    match acc {
        Some(a) => Some(a),
        None => f.zero(),
    }
}

/// Exponent vectors in n variables with every exponent <= d, by total
/// degree.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|m: Vec<u32>| (0..=d).map(move |e| [m.clone(), vec![e]].concat()))
            .collect();
    }
    out.sort_by_key(|m| (m.iter().sum::<u32>(), std::cmp::Reverse(m.clone())));
    out
}

/// Candidate formulas of height exactly h: at most three terms, coefficients
/// in {+-1, +-2}, some term with y and some without, first coefficient positive.
fn candidates_of_height(r: usize, h: u32) -> Vec<PolyFormula> {
    let ms = monomials(r + 1, h);
    let coefs: Vec<i64> = [1i64, -1, 2, -2]
        .into_iter()
        .filter(|c| c.unsigned_abs() as u32 <= h)
        .collect();
    let mut out = Vec::new();
    for k in 1..=3usize.min(ms.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let chosen: Vec<&Vec<u32>> = idx.iter().map(|&i| &ms[i]).collect();
            let with_y = chosen.iter().any(|m| m[r] > 0);
            let without_y = chosen.iter().any(|m| m[r] == 0);
            // y = 0 is the one formula without a y-free term
            let bare_y = k == 1 && chosen[0][r] == 1 && chosen[0].iter().sum::<u32>() == 1;
            if with_y && (without_y || bare_y) {
                let mut cs = vec![0usize; k];
                loop {
                    if coefs[cs[0]] > 0 {
                        let f = PolyFormula {
                            terms: cs
                                .iter()
                                .zip(&chosen)
                                .map(|(&c, m)| (coefs[c], (*m).clone()))
                                .collect(),
                        };
                        if f.height() == h {
                            out.push(f);
                        }
                    }
                    let Some(i) = (0..k).rev().find(|&i| cs[i] + 1 < coefs.len()) else {
                        break;
                    };
                    cs[i] += 1;
                    for x in cs.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                }
            }
            let Some(i) = (0..k).rev().find(|&i| idx[i] < ms.len() - k + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct FdConfig {
    pub max_height: u32,
    /// Polynomial evaluations per update.
    pub evals_per_update: usize,
    /// Elements considered: codes below this.
    pub max_elements: Code,
    /// Nonzero polynomials checked against the basis.
    pub check_polys: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            max_height: 3,
            evals_per_update: 6000,
            max_elements: 4096,
            check_polys: 64,
        }
    }
}

/// An element waiting for a formula: candidates before `cursor` were
/// false at it or are listed in `undecided`.
struct PendingElement {
    y: Code,
    cursor: usize,
    undecided: Vec<usize>,
}

/// Stagewise enumeration of S for a field: each element y, in code order,
/// contributes the first candidate formula P with P(a, y) = 0.
pub struct FdBuilder {
    basis: Vec<Code>,
    config: FdConfig,
    cands: Vec<PolyFormula>,
    next: Code,
    pending: Vec<PendingElement>,
    seen: HashSet<usize>,
    s: Vec<PolyFormula>,
    unrelated: Vec<Code>,
    stage: u64,
}

impl FdBuilder {
    pub fn new(basis: &[Code], config: FdConfig) -> Self {
        let r = basis.len();
        let cands: Vec<PolyFormula> = (1..=config.max_height)
            .flat_map(|h| candidates_of_height(r, h))
            .collect();
        FdBuilder {
            basis: basis.to_vec(),
            config,
            cands,
            next: 0,
            pending: Vec::new(),
            seen: HashSet::new(),
            s: Vec::new(),
            unrelated: Vec::new(),
            stage: 0,
        }
    }

    pub fn formulas(&self) -> &[PolyFormula] {
        &self.s
    }

    /// Elements with no relation among the candidate formulas.
    pub fn unrelated(&self) -> &[Code] {
        &self.unrelated
    }

    pub fn update(&mut self, d: &Diagram, stage: u64) -> Result<(), ScottError> {
        self.stage = stage;
        let f = FieldView::new(d, stage);
        let r = self.basis.len();
        if r > 0 {
            for i in 0..self.config.check_polys {
                let mut terms = integer_polynomial(r, i);
                for t in terms.iter_mut() {
                    t.1.push(0);
                }
                let p = PolyFormula { terms };
                if p.vanishes(&f, &self.basis) == Some(true) {
                    return Err(ScottError::InvalidBasis(format!(
                        "polynomial {} vanishes on {:?}",
                        p.term(),
                        self.basis
                    )));
                }
            }
        }
        let size = d.size_at(stage).min(self.config.max_elements);
        while self.next < size {
            self.pending.push(PendingElement {
                y: self.next,
                cursor: 0,
                undecided: Vec::new(),
            });
            self.next += 1;
        }
        let mut point = self.basis.clone();
        point.push(0);
        let mut budget = self.config.evals_per_update;
        let mut i = 0;
        while budget > 0 && i < self.pending.len() {
            let e = &mut self.pending[i];
            point[r] = e.y;
            let mut found = None;
            let mut still = Vec::new();
            let undecided = std::mem::take(&mut e.undecided);
            let fresh = e.cursor..self.cands.len();
            for k in undecided.into_iter().chain(fresh) {
                if found.is_some() || budget == 0 {
                    if k >= e.cursor {
                        break;
                    }
                    still.push(k);
                    continue;
                }
                budget -= 1;
                if k >= e.cursor {
                    e.cursor = k + 1;
                }
                match self.cands[k].vanishes(&f, &point) {
                    Some(true) => found = Some(k),
                    Some(false) => {}
                    None => still.push(k),
                }
            }
            e.undecided = still;
            match found {
                Some(k) => {
                    self.pending.remove(i);
                    if self.seen.insert(k) {
                        self.s.push(self.cands[k].clone());
                    }
                }
                None if e.cursor >= self.cands.len() && e.undecided.is_empty() => {
                    self.unrelated.push(e.y);
                    self.pending.remove(i);
                }
                None => i += 1,
            }
        }
        Ok(())
    }

    pub fn sentence(&self) -> InfSentence {
        let r = self.basis.len() as Var;
        let atoms: Vec<Node> = self.s.iter().map(PolyFormula::atom).collect();
        let presence = atoms.iter().map(|a| exists(&[r], a.clone())).collect();
        let indep = (r > 0).then(|| Family::AlgebraicIndependence((0..r).collect()));
        template(
            format!("FD_{r}"),
            &self.basis,
            self.stage,
            field_axioms(),
            indep,
            presence,
            atoms,
        )
    }
}

pub fn scott_fd(d: &Diagram, basis: &[Code], stage: u64) -> Result<InfSentence, ScottError> {
    scott_fd_with(d, basis, stage, FdConfig::default())
}

pub fn scott_fd_with(
    d: &Diagram,
    basis: &[Code],
    stage: u64,
    config: FdConfig,
) -> Result<InfSentence, ScottError> {
    let mut b = FdBuilder::new(basis, config);
    for s in 0..=stage {
        b.update(d, s)?;
    }
    Ok(b.sentence())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_listing() {
        let c1 = candidates_of_height(1, 1);
        // y - x, y + x, y - 1, y + 1 and three-term combinations
        assert!(c1.contains(&PolyFormula {
            terms: vec![(1, vec![1, 0]), (-1, vec![0, 1])]
        }));
        assert!(c1.iter().all(|p| p.terms[0].0 > 0 && p.height() == 1));
        let c3 = candidates_of_height(1, 3);
        assert!(
            c3.contains(&PolyFormula {
                terms: vec![(1, vec![0, 3]), (-1, vec![1, 0])]
            }) || c3.contains(&PolyFormula {
                terms: vec![(1, vec![1, 0]), (-1, vec![0, 3])]
            })
        );
    }
}
