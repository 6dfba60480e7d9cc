//! Infinitary sentences: finitary atoms, quantifiers, and countable
//! conjunctions and disjunctions whose children come from a generator.

use std::fmt;

use serde::Serialize;

pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "t", content = "a")]
pub enum Term {
    Var(Var),
    Zero,
    One,
    Int(i64),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Mul(Box<Term>, Box<Term>),
    /// n-fold sum.
    Scale(i64, Box<Term>),
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn scale(n: i64, a: Term) -> Term {
        Term::Scale(n, Box::new(a))
    }

    /// Sum of n_i v_i, or 0 for an empty or all-zero combination.
    pub fn linear(terms: &[(i64, Var)]) -> Term {
        let mut acc: Option<Term> = None;
        for &(n, v) in terms.iter().filter(|(n, _)| *n != 0) {
            let t = if n == 1 {
                Term::Var(v)
            } else {
                Term::scale(n, Term::Var(v))
            };
            acc = Some(match acc {
                None => t,
                Some(a) => Term::add(a, t),
            });
        }
        acc.unwrap_or(Term::Zero)
    }

    /// Integer polynomial: sum of c * prod v^e.
    pub fn poly(terms: &[(i64, Vec<(Var, u32)>)]) -> Term {
        let mut acc: Option<Term> = None;
        for (c, mono) in terms.iter().filter(|(c, _)| *c != 0) {
            let mut m: Option<Term> = None;
            for &(v, e) in mono {
                for _ in 0..e {
                    m = Some(match m {
                        None => Term::Var(v),
                        Some(a) => Term::mul(a, Term::Var(v)),
                    });
                }
            }
            let t = match (m, *c) {
                (None, c) => Term::Int(c),
                (Some(m), 1) => m,
                (Some(m), c) => Term::mul(Term::Int(c), m),
            };
            acc = Some(match acc {
                None => t,
                Some(a) => Term::add(a, t),
            });
        }
        acc.unwrap_or(Term::Zero)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "v{v}"),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Int(n) => write!(f, "{n}"),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Sub(a, b) => write!(f, "({a} - {b})"),
            Term::Neg(a) => write!(f, "-{a}"),
            Term::Mul(a, b) => write!(f, "{a}*{b}"),
            Term::Scale(n, a) => write!(f, "{n}{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atom {
    pub lhs: Term,
    pub rhs: Term,
    /// `=` when true, `!=` otherwise.
    pub eq: bool,
}

/// Infinite families listed by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Children committed so far, in order of commitment.
    Committed(Vec<Node>),
    /// m_1 v_1 + ... + m_r v_r != 0 over primitive nonzero integer vectors, by height.
    LinearIndependence(Vec<Var>),
    /// P(v) != 0 over nonzero integer polynomials.
    AlgebraicIndependence(Vec<Var>),
    /// forall x (n x != 0 or x = 0), n >= 2.
    TorsionFree(Var),
    /// n != 0, n >= 1.
    CharZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    /// All children are listed.
    Complete(usize),
    /// Children committed so far; more may follow.
    SoFar(usize),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gen {
    pub label: String,
    pub family: Family,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "node")]
pub enum Node {
    Atom(Atom),
    And { children: Vec<Node> },
    Or { children: Vec<Node> },
    Exists { vars: Vec<Var>, body: Box<Node> },
    Forall { vars: Vec<Var>, body: Box<Node> },
    CountableAnd(Gen),
    CountableOr(Gen),
}

/// Nonzero integer vectors with gcd 1, ordered by max norm then
/// lexicographically from -h upward, first nonzero entry positive.
pub fn primitive_vector(r: usize, i: usize) -> Vec<i64> {
    assert!(r > 0, "empty tuple has no nonzero vectors");
    let mut seen = 0;
    for h in 1i64.. {
        let mut v = vec![-h; r];
        loop {
            let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            let top = v.iter().any(|x| x.abs() == h);
            if top && first > 0 && v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1 {
                if seen == i {
                    return v;
                }
                seen += 1;
            }
            let Some(k) = (0..r).rev().find(|&k| v[k] < h) else {
                break;
            };
            v[k] += 1;
            for x in v.iter_mut().skip(k + 1) {
                *x = -h;
            }
        }
    }
    unreachable!()
}

/// Monomials in r variables by total degree, then lexicographically.
fn monomial(r: usize, mut i: usize) -> Vec<u32> {
    let mut d = 0u32;
    loop {
        let ms = monomials_of_degree(r, d);
        if i < ms.len() {
            return ms[i].clone();
        }
        i -= ms.len();
        d += 1;
    }
}

fn monomials_of_degree(r: usize, d: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for e in (0..=d).rev() {
        for mut rest in monomials_of_degree(r - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// The i-th nonzero integer polynomial in r variables (i >= 0): i + 2 is
/// factored as prod p_k^e_k and monomial k gets coefficient zigzag(e_k).
pub fn integer_polynomial(r: usize, i: usize) -> Vec<(i64, Vec<u32>)> {
    let mut n = i as u64 + 2;
    let mut out = Vec::new();
    let mut k = 0;
    while n > 1 {
        let p = crate::primes::nth_prime(k);
        let mut e = 0i64;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            let c = if e % 2 == 1 { -(e + 1) / 2 } else { e / 2 };
            out.push((c, monomial(r, k)));
        }
        k += 1;
    }
    out
}

impl Gen {
    pub fn committed(label: &str, children: Vec<Node>) -> Gen {
        Gen {
            label: label.into(),
            family: Family::Committed(children),
        }
    }

    /// Child i, if the generator has produced it.
    pub fn child(&self, i: usize) -> Option<Node> {
        match &self.family {
            Family::Committed(c) => c.get(i).cloned(),
            Family::LinearIndependence(vars) => {
                if vars.len() == 1 && i > 0 {
                    return None;
                }
                let v = primitive_vector(vars.len(), i);
                let terms: Vec<(i64, Var)> = v.into_iter().zip(vars.iter().copied()).collect();
                Some(Node::Atom(Atom {
                    lhs: Term::linear(&terms),
                    rhs: Term::Zero,
                    eq: false,
                }))
            }
            Family::AlgebraicIndependence(vars) => {
                let p = integer_polynomial(vars.len(), i);
                let terms: Vec<(i64, Vec<(Var, u32)>)> = p
                    .into_iter()
                    .map(|(c, m)| (c, vars.iter().copied().zip(m).collect()))
                    .collect();
                Some(Node::Atom(Atom {
                    lhs: Term::poly(&terms),
                    rhs: Term::Zero,
                    eq: false,
                }))
            }
            Family::TorsionFree(x) => {
                let n = i as i64 + 2;
                let body = Node::Or {
                    children: vec![
                        Node::Atom(Atom {
                            lhs: Term::scale(n, Term::Var(*x)),
                            rhs: Term::Zero,
                            eq: false,
                        }),
                        Node::Atom(Atom {
                            lhs: Term::Var(*x),
                            rhs: Term::Zero,
                            eq: true,
                        }),
                    ],
                };
                Some(Node::Forall {
                    vars: vec![*x],
                    body: Box::new(body),
                })
            }
            Family::CharZero => Some(Node::Atom(Atom {
                lhs: Term::Int(i as i64 + 1),
                rhs: Term::Zero,
                eq: false,
            })),
        }
    }

    pub fn size(&self) -> Size {
        match &self.family {
            Family::Committed(c) => Size::SoFar(c.len()),
            Family::LinearIndependence(v) if v.len() == 1 => Size::Complete(1),
            _ => Size::Infinite,
        }
    }

    /// Number of children available now; `None` for an infinite static family.
    pub fn produced(&self) -> Option<usize> {
        match self.size() {
            Size::SoFar(n) | Size::Complete(n) => Some(n),
            Size::Infinite => None,
        }
    }
}

impl Serialize for Gen {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        const SHOWN: usize = 4;
        let mut st = s.serialize_struct("Gen", 3)?;
        st.serialize_field("label", &self.label)?;
        match &self.family {
            Family::Committed(c) => {
                st.serialize_field("family", "committed")?;
                st.serialize_field("children", c)?;
            }
            other => {
                let name = match other {
                    Family::LinearIndependence(_) => "linear_independence",
                    Family::AlgebraicIndependence(_) => "algebraic_independence",
                    Family::TorsionFree(_) => "torsion_free",
                    _ => "char_zero",
                };
                st.serialize_field("family", name)?;
                let first: Vec<Node> = (0..SHOWN).filter_map(|i| self.child(i)).collect();
                st.serialize_field("children", &first)?;
            }
        }
        st.end()
    }
}

/// Least n with the node in Sigma_n and in Pi_n (finitary quantifier-free
/// formulas are level 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Complexity {
    pub sigma: u32,
    pub pi: u32,
}

fn sigma_of_exists(c: Complexity) -> u32 {
    c.sigma.max(1).min(c.pi + 1)
}

fn pi_of_forall(c: Complexity) -> u32 {
    c.pi.max(1).min(c.sigma + 1)
}

impl Node {
    pub fn complexity(&self) -> Complexity {
        match self {
            Node::Atom(_) => Complexity { sigma: 0, pi: 0 },
            Node::And { children } | Node::Or { children } => children
                .iter()
                .map(|c| c.complexity())
                .fold(Complexity { sigma: 0, pi: 0 }, |a, b| Complexity {
                    sigma: a.sigma.max(b.sigma),
                    pi: a.pi.max(b.pi),
                }),
            Node::Exists { vars, body } => {
                let b = body.complexity();
                if vars.is_empty() {
                    return b;
                }
                let s = sigma_of_exists(b);
                Complexity {
                    sigma: s,
                    pi: s + 1,
                }
            }
            Node::Forall { vars, body } => {
                let b = body.complexity();
                if vars.is_empty() {
                    return b;
                }
                let p = pi_of_forall(b);
                Complexity {
                    sigma: p + 1,
                    pi: p,
                }
            }
            Node::CountableAnd(g) => {
                let p = g.sample().map(pi_of_forall).max().unwrap_or(1);
                Complexity {
                    sigma: p + 1,
                    pi: p,
                }
            }
            Node::CountableOr(g) => {
                let s = g.sample().map(sigma_of_exists).max().unwrap_or(1);
                Complexity {
                    sigma: s,
                    pi: s + 1,
                }
            }
        }
    }
}

impl Gen {
    /// Complexities of the committed children, or of a few children of a
    /// static family (all of its children share one shape).
    fn sample(&self) -> impl Iterator<Item = Complexity> + '_ {
        let n = self.produced().unwrap_or(2);
        (0..n).filter_map(|i| self.child(i)).map(|c| c.complexity())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.lhs,
            if self.eq { "=" } else { "!=" },
            self.rhs
        )
    }
}

fn vars_text(vars: &[Var]) -> String {
    vars.iter()
        .map(|v| format!("v{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 3;
        let list =
            |f: &mut fmt::Formatter<'_>, op: &str, items: Vec<Node>, more: bool| -> fmt::Result {
                let mut parts: Vec<String> = items.iter().map(|c| c.to_string()).collect();
                if more {
                    parts.push("...".into());
                }
                write!(f, "{op}[{}]", parts.join("; "))
            };
        match self {
            Node::Atom(a) => write!(f, "{a}"),
            Node::And { children } => list(f, "AND", children.clone(), false),
            Node::Or { children } => list(f, "OR", children.clone(), false),
            Node::Exists { vars, body } => write!(f, "EXISTS {} ({body})", vars_text(vars)),
            Node::Forall { vars, body } => write!(f, "FORALL {} ({body})", vars_text(vars)),
            Node::CountableAnd(g) | Node::CountableOr(g) => {
                let op = if matches!(self, Node::CountableAnd(_)) {
                    "BIGAND"
                } else {
                    "BIGOR"
                };
                let n = g.produced().unwrap_or(SHOWN + 1);
                let items = (0..n.min(SHOWN)).filter_map(|i| g.child(i)).collect();
                list(f, &format!("{op}_{}", g.label), items, n > SHOWN)
            }
        }
    }
}

/// A sentence together with how it was produced.
#[derive(Debug, Clone, Serialize)]
pub struct InfSentence {
    pub structure: String,
    pub basis: Vec<u64>,
    pub stage: u64,
    pub root: Node,
}

impl InfSentence {
    pub fn complexity(&self) -> Complexity {
        self.root.complexity()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl fmt::Display for InfSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_listing() {
        let first: Vec<Vec<i64>> = (0..8).map(|i| primitive_vector(2, i)).collect();
        let want: Vec<Vec<i64>> = [
            [0, 1],
            [1, -1],
            [1, 0],
            [1, 1],
            [1, -2],
            [1, 2],
            [2, -1],
            [2, 1],
        ]
        .iter()
        .map(|v| v.to_vec())
        .collect();
        assert_eq!(first, want);
        assert_eq!(primitive_vector(1, 0), vec![1]);
        let g = Gen {
            label: "indep".into(),
            family: Family::LinearIndependence(vec![0]),
        };
        assert_eq!(g.size(), Size::Complete(1));
        assert!(g.child(1).is_none());
    }
}
