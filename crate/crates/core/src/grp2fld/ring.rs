//! The group ring Q[G] of a group known only through its diagram, and
//! formal quotients of its elements.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diagrams::Code;
use crate::exact_algebra::{parse_rational, Rational};
use crate::tfab::GroupView;

/// Finite Q-linear combination of monomials Y_g, keyed by group code.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MonomialCombination(BTreeMap<Code, Rational>);

impl MonomialCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(g: Code, c: Rational) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(g, c);
        }
        MonomialCombination(m)
    }

    /// Y_g with coefficient 1.
    pub fn y(g: Code) -> Self {
        Self::monomial(g, Rational::one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Code, Rational)>) -> Self {
        let mut m = MonomialCombination::zero();
        for (g, c) in terms {
            m.add_term(g, &c);
        }
        m
    }

    fn add_term(&mut self, g: Code, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(g).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&g);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Code, &Rational)> {
        self.0.iter().map(|(&g, c)| (g, c))
    }

    pub fn coeff(&self, g: Code) -> Rational {
        self.0.get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The single term, if there is exactly one.
    pub fn as_monomial(&self) -> Option<(Code, &Rational)> {
        if self.0.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// Image under the augmentation Y_g -> 1.
    pub fn augmentation(&self) -> Rational {
        self.0.values().fold(Rational::zero(), |a, c| a + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (g, c) in o.terms() {
            r.add_term(g, c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        MonomialCombination(self.0.iter().map(|(&g, c)| (g, -c)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        MonomialCombination(self.0.iter().map(|(&g, c)| (g, c * a)).collect())
    }

    /// Rename monomials along a code map (merging any that collide).
    pub fn map_codes(&self, f: impl Fn(Code) -> Code) -> Self {
        Self::from_terms(self.0.iter().map(|(&g, c)| (f(g), c.clone())))
    }

    pub fn max_code(&self) -> Option<Code> {
        self.0.keys().next_back().copied()
    }
}

impl fmt::Display for MonomialCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(g, c)| format!("{c}*Y[{g}]"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse monomial combination: {0}")]
pub struct ParseCombinationError(String);

impl FromStr for MonomialCombination {
    type Err = ParseCombinationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || ParseCombinationError(s.to_string());
        let mut terms = Vec::new();
        for part in s.split(" + ") {
            let (c, y) = part.trim().split_once('*').ok_or_else(bad)?;
            let code = y
                .strip_prefix("Y[")
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(bad)?;
            terms.push((
                code.parse::<Code>().map_err(|_| bad())?,
                parse_rational(c).ok_or_else(bad)?,
            ));
        }
        Ok(Self::from_terms(terms))
    }
}

/// Convolution product over the committed sums of the group. `None` while a
/// needed sum m + n is uncommitted.
pub fn ring_mul(
    a: &MonomialCombination,
    b: &MonomialCombination,
    g: &GroupView,
) -> Option<MonomialCombination> {
    let mut out = MonomialCombination::zero();
    for (m, am) in a.terms() {
        for (n, bn) in b.terms() {
            let k = g.add(m, n)?;
            out.add_term(k, &(am * bn));
        }
    }
    Some(out)
}

pub fn ring_pow(a: &MonomialCombination, mut e: u64, g: &GroupView) -> Option<MonomialCombination> {
    let mut acc = MonomialCombination::y(g.zero()?);
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = ring_mul(&acc, &base, g)?;
        }
        e >>= 1;
        if e > 0 {
            base = ring_mul(&base, &base, g)?;
        }
    }
    Some(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equality {
    Equal,
    Unequal,
    Unknown,
}

/// A / B with B nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldQuotient {
    num: MonomialCombination,
    den: MonomialCombination,
}

impl FieldQuotient {
    pub fn new(num: MonomialCombination, den: MonomialCombination) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(FieldQuotient { num, den })
    }

    /// a / Y_e.
    pub fn ring(a: MonomialCombination, e: Code) -> Self {
        FieldQuotient {
            num: a,
            den: MonomialCombination::y(e),
        }
    }

    pub fn zero(e: Code) -> Self {
        Self::ring(MonomialCombination::zero(), e)
    }

    pub fn one(e: Code) -> Self {
        Self::ring(MonomialCombination::y(e), e)
    }

    pub fn num(&self) -> &MonomialCombination {
        &self.num
    }

    pub fn den(&self) -> &MonomialCombination {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn size(&self) -> usize {
        self.num.len() + self.den.len()
    }

    /// c·Y_g when the quotient is literally c·Y_g / Y_e.
    pub fn as_monomial(&self, e: Code) -> Option<(Code, &Rational)> {
        match self.den.as_monomial() {
            Some((d, c)) if d == e && c.is_one() => self.num.as_monomial(),
            _ => None,
        }
    }

    pub fn map_codes(&self, f: impl Fn(Code) -> Code) -> Self {
        FieldQuotient {
            num: self.num.map_codes(&f),
            den: self.den.map_codes(&f),
        }
    }

    pub fn add(&self, o: &Self, g: &GroupView) -> Option<Self> {
        if self.den == o.den {
            return Some(FieldQuotient {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            });
        }
        let num = ring_mul(&self.num, &o.den, g)?.add(&ring_mul(&o.num, &self.den, g)?);
        Some(FieldQuotient {
            num,
            den: ring_mul(&self.den, &o.den, g)?,
        })
    }

    pub fn neg(&self) -> Self {
        FieldQuotient {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self, g: &GroupView) -> Option<Self> {
        self.add(&o.neg(), g)
    }

    pub fn mul(&self, o: &Self, g: &GroupView) -> Option<Self> {
        let e = g.zero()?;
        let unit = MonomialCombination::y(e);
        let num = ring_mul(&self.num, &o.num, g)?;
        let den = match (self.den == unit, o.den == unit) {
            (true, _) => o.den.clone(),
            (_, true) => self.den.clone(),
            _ => ring_mul(&self.den, &o.den, g)?,
        };
        Some(FieldQuotient { num, den })
    }

    pub fn inv(&self) -> Option<Self> {
        FieldQuotient::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u64, g: &GroupView) -> Option<Self> {
        Some(FieldQuotient {
            num: ring_pow(&self.num, e, g)?,
            den: ring_pow(&self.den, e, g)?,
        })
    }
}

impl fmt::Display for FieldQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.num, self.den)
    }
}

/// A/B ~ C/D iff AD = CB, decided through committed sums.
pub fn quotient_eq(p: &FieldQuotient, q: &FieldQuotient, g: &GroupView) -> Equality {
    if p == q {
        return Equality::Equal;
    }
    if p.den == q.den {
        return if p.num == q.num {
            Equality::Equal
        } else {
            Equality::Unequal
        };
    }
    // the augmentation is a ring map to Q, so it must respect the identity
    if p.num.augmentation() * q.den.augmentation() != q.num.augmentation() * p.den.augmentation() {
        return Equality::Unequal;
    }
    let (Some(l), Some(r)) = (ring_mul(&p.num, &q.den, g), ring_mul(&q.num, &p.den, g)) else {
        return Equality::Unknown;
    };
    if l == r {
        Equality::Equal
    } else {
        Equality::Unequal
    }
}

/// Y_g / Y_e.
pub fn monomial_map(g: Code, view: &GroupView) -> Option<FieldQuotient> {
    Some(FieldQuotient::ring(MonomialCombination::y(g), view.zero()?))
}
