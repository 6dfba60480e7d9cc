//! Finite-stage evaluation of infinitary sentences against a committed
//! diagram prefix.

use std::fmt;

use serde::Serialize;

use crate::diagrams::{Code, Diagram};
use crate::fd_fields::FieldView;
use crate::tfab::GroupView;

use super::sentence::{Atom, Gen, InfSentence, Node, Size, Term, Var};

/// `True` and `False` are sound: no larger bound or later stage changes
/// them. The `AtBound` verdicts hold for the searched part only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    TrueAtBound,
    Unknown,
    FalseAtBound,
    False,
}

impl Verdict {
    pub fn is_sound(self) -> bool {
        matches!(self, Verdict::True | Verdict::False)
    }

    /// Not refuted at the bound.
    pub fn is_true_ish(self) -> bool {
        matches!(self, Verdict::True | Verdict::TrueAtBound)
    }

    pub fn is_false_ish(self) -> bool {
        matches!(self, Verdict::False | Verdict::FalseAtBound)
    }

    fn and_rank(self) -> u8 {
        match self {
            Verdict::False => 4,
            Verdict::FalseAtBound => 3,
            Verdict::Unknown => 2,
            Verdict::TrueAtBound => 1,
            Verdict::True => 0,
        }
    }

    fn or_rank(self) -> u8 {
        match self {
            Verdict::True => 4,
            Verdict::TrueAtBound => 3,
            Verdict::Unknown => 2,
            Verdict::FalseAtBound => 1,
            Verdict::False => 0,
        }
    }

    pub fn and(self, o: Verdict) -> Verdict {
        if self.and_rank() >= o.and_rank() {
            self
        } else {
            o
        }
    }

    pub fn or(self, o: Verdict) -> Verdict {
        if self.or_rank() >= o.or_rank() {
            self
        } else {
            o
        }
    }

    /// Weaken a sound verdict reached on part of an incomplete search.
    fn at_bound(self) -> Verdict {
        match self {
            Verdict::True => Verdict::TrueAtBound,
            Verdict::False => Verdict::FalseAtBound,
            v => v,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::TrueAtBound => "true@bound",
            Verdict::Unknown => "unknown",
            Verdict::FalseAtBound => "false@bound",
            Verdict::False => "false",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Quantifiers range over codes below this.
    pub witness: u64,
    /// Countable connectives expand this many children.
    pub generator: usize,
}

enum Reader<'a> {
    Group(GroupView<'a>),
    Field(FieldView<'a>),
}

struct Ctx<'a> {
    reader: Reader<'a>,
    universe: Code,
    bounds: Bounds,
    env: Vec<Option<Code>>,
}

fn max_var(n: &Node) -> Var {
    fn term(t: &Term) -> Var {
        match t {
            Term::Var(v) => *v,
            Term::Zero | Term::One | Term::Int(_) => 0,
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => term(a).max(term(b)),
            Term::Neg(a) | Term::Scale(_, a) => term(a),
        }
    }
    match n {
        Node::Atom(a) => term(&a.lhs).max(term(&a.rhs)),
        Node::And { children } | Node::Or { children } => {
            children.iter().map(max_var).max().unwrap_or(0)
        }
        Node::Exists { vars, body } | Node::Forall { vars, body } => {
            vars.iter().copied().max().unwrap_or(0).max(max_var(body))
        }
        Node::CountableAnd(g) | Node::CountableOr(g) => {
            let mut m = match &g.family {
                super::sentence::Family::LinearIndependence(v)
                | super::sentence::Family::AlgebraicIndependence(v) => {
                    v.iter().copied().max().unwrap_or(0)
                }
                super::sentence::Family::TorsionFree(x) => *x,
                _ => 0,
            };
            if let Some(n) = g.produced() {
                for i in 0..n {
                    m = m.max(g.child(i).map(|c| max_var(&c)).unwrap_or(0));
                }
            }
            m
        }
    }
}

fn quantifier_free(n: &Node) -> bool {
    match n {
        Node::Atom(_) => true,
        Node::And { children } | Node::Or { children } => children.iter().all(quantifier_free),
        _ => false,
    }
}

impl Ctx<'_> {
    fn term(&self, t: &Term) -> Option<Code> {
        match &self.reader {
            Reader::Group(g) => match t {
                Term::Var(v) => self.env.get(*v as usize).copied().flatten(),
                Term::Zero => g.zero(),
                Term::Add(a, b) => g.add(self.term(a)?, self.term(b)?),
                Term::Sub(a, b) => g.add(self.term(a)?, g.neg(self.term(b)?)?),
                Term::Neg(a) => g.neg(self.term(a)?),
                Term::Scale(n, a) => g.mul(*n, self.term(a)?),
                Term::One | Term::Int(_) | Term::Mul(..) => None,
            },
            Reader::Field(f) => match t {
                Term::Var(v) => self.env.get(*v as usize).copied().flatten(),
                Term::Zero => f.zero(),
                Term::One => f.one(),
                Term::Int(n) => f.int(*n),
                Term::Add(a, b) => f.add(self.term(a)?, self.term(b)?),
                Term::Sub(a, b) => f.sub(self.term(a)?, self.term(b)?),
                Term::Neg(a) => f.neg(self.term(a)?),
                Term::Mul(a, b) => f.mul(self.term(a)?, self.term(b)?),
                Term::Scale(n, a) => f.mul(f.int(*n)?, self.term(a)?),
            },
        }
    }

    fn atom(&self, a: &Atom) -> Verdict {
        match (self.term(&a.lhs), self.term(&a.rhs)) {
            (Some(x), Some(y)) => {
                if (x == y) == a.eq {
                    Verdict::True
                } else {
                    Verdict::False
                }
            }
            _ => Verdict::Unknown,
        }
    }

    /// Codes a quantifier ranges over: an existential block with a
    /// quantifier-free body searches the whole committed prefix, any other
    /// block stops at the witness bound. Past the bound an undecided branch
    /// counts as unwitnessed.
    fn range(&self, body: &Node, exists: bool) -> Code {
        if self.bounds.witness == 0 {
            return 0;
        }
        if exists && quantifier_free(body) {
            self.universe
        } else {
            self.bounds.witness.min(self.universe)
        }
    }

    /// Calls `f` on each assignment of codes below `n` to `vars`, stopping
    /// when it returns true.
    fn each_tuple(&mut self, vars: &[Var], n: Code, f: &mut dyn FnMut(&mut Self) -> bool) {
        if n == 0 {
            return;
        }
        let mut t = vec![0 as Code; vars.len()];
        loop {
            for (v, &c) in vars.iter().zip(&t) {
                self.env[*v as usize] = Some(c);
            }
            if f(self) {
                break;
            }
            let Some(k) = (0..t.len()).rev().find(|&k| t[k] + 1 < n) else {
                break;
            };
            t[k] += 1;
            for x in t.iter_mut().skip(k + 1) {
                *x = 0;
            }
        }
        for v in vars {
            self.env[*v as usize] = None;
        }
    }

    fn quantifier(&mut self, vars: &[Var], body: &Node, exists: bool) -> Verdict {
        if vars.is_empty() {
            return self.node(body);
        }
        let n = self.range(body, exists);
        if n == 0 {
            return Verdict::Unknown;
        }
        let saved: Vec<Option<Code>> = vars.iter().map(|v| self.env[*v as usize]).collect();
        let mut acc = if exists {
            Verdict::False
        } else {
            Verdict::True
        };
        let w = self.bounds.witness;
        self.each_tuple(vars, n, &mut |c| {
            let mut v = c.node(body);
            // past the witness bound only positive evidence counts
            if exists
                && v == Verdict::Unknown
                && vars
                    .iter()
                    .any(|x| c.env[*x as usize].is_some_and(|y| y >= w))
            {
                v = Verdict::FalseAtBound;
            }
            if exists {
                acc = acc.or(v);
                acc == Verdict::True
            } else {
                acc = acc.and(v);
                acc == Verdict::False
            }
        });
        for (v, s) in vars.iter().zip(saved) {
            self.env[*v as usize] = s;
        }
        // the search covered only part of the universe
        match acc {
            Verdict::True if exists => Verdict::True,
            Verdict::False if !exists => Verdict::False,
            v => v.at_bound(),
        }
    }

    fn countable(&mut self, g: &Gen, conj: bool) -> Verdict {
        let (n, complete) = match g.size() {
            Size::Complete(n) => (n, true),
            Size::SoFar(n) => (n, false),
            Size::Infinite => (usize::MAX, false),
        };
        let take = n.min(self.bounds.generator);
        if take == 0 && !complete {
            return Verdict::Unknown;
        }
        let mut acc = if conj { Verdict::True } else { Verdict::False };
        for i in 0..take {
            let Some(c) = g.child(i) else { break };
            let v = self.node(&c);
            acc = if conj { acc.and(v) } else { acc.or(v) };
            if (conj && acc == Verdict::False) || (!conj && acc == Verdict::True) {
                return acc;
            }
        }
        if complete && take == n {
            acc
        } else {
            acc.at_bound()
        }
    }

    fn node(&mut self, n: &Node) -> Verdict {
        match n {
            Node::Atom(a) => self.atom(a),
            Node::And { children } => {
                let mut acc = Verdict::True;
                for c in children {
                    acc = acc.and(self.node(c));
                    if acc == Verdict::False {
                        break;
                    }
                }
                acc
            }
            Node::Or { children } => {
                let mut acc = Verdict::False;
                for c in children {
                    acc = acc.or(self.node(c));
                    if acc == Verdict::True {
                        break;
                    }
                }
                acc
            }
            Node::Exists { vars, body } => self.quantifier(vars, body, true),
            Node::Forall { vars, body } => self.quantifier(vars, body, false),
            Node::CountableAnd(g) => self.countable(g, true),
            Node::CountableOr(g) => self.countable(g, false),
        }
    }
}

/// Evaluate `node` on the facts of `d` committed by `stage`, in the
/// signature of `d`.
pub fn eval_node(node: &Node, d: &Diagram, stage: u64, bounds: Bounds) -> Verdict {
    eval_node_at(node, d, stage, bounds, &[])
}

/// As [`eval_node`] with some free variables bound to codes.
pub fn eval_node_at(
    node: &Node,
    d: &Diagram,
    stage: u64,
    bounds: Bounds,
    assignment: &[(Var, Code)],
) -> Verdict {
    let universe = d.size_at(stage);
    let reader = if d.signature().name == "FIELD" {
        Reader::Field(FieldView::new(d, stage))
    } else {
        Reader::Group(GroupView::new(d, stage))
    };
    let top = assignment
        .iter()
        .map(|a| a.0)
        .chain([max_var(node)])
        .max()
        .unwrap_or(0);
    let mut env = vec![None; top as usize + 1];
    for &(v, c) in assignment {
        env[v as usize] = Some(c);
    }
    let mut ctx = Ctx {
        reader,
        universe,
        bounds,
        env,
    };
    ctx.node(node)
}

pub fn eval_bounded(
    s: &InfSentence,
    d: &Diagram,
    stage: u64,
    witness_bound: u64,
    generator_bound: usize,
) -> Verdict {
    eval_node(
        &s.root,
        d,
        stage,
        Bounds {
            witness: witness_bound,
            generator: generator_bound,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connectives() {
        use Verdict::*;
        assert_eq!(True.and(Unknown), Unknown);
        assert_eq!(FalseAtBound.and(Unknown), FalseAtBound);
        assert_eq!(FalseAtBound.or(Unknown), Unknown);
        assert_eq!(False.or(TrueAtBound), TrueAtBound);
        assert_eq!(True.at_bound(), TrueAtBound);
    }
}
