//! Dense univariate polynomials over an exact field.

use std::fmt;

use super::field::{parse_rational, Field, Rational};

/// Coefficients stored low degree first; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    c: Vec<F>,
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.render("x"))
    }
}

impl<F: Field> Poly<F> {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(a: F) -> Self {
        Self::from_coeffs(vec![a])
    }

    /// The monomial `a * x^k`.
    pub fn monomial(a: F, k: usize) -> Self {
        let mut c = vec![F::zero(); k + 1];
        c[k] = a;
        Self::from_coeffs(c)
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn from_coeffs(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|a| a.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&n| F::from_int(n)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> F {
        self.c.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.c.iter().map(f).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Poly {
            c: self.c.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, a: &F) -> Self {
        Self::from_coeffs(self.c.iter().map(|b| b.mul(a)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(c)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        let inv = d.lc().inv().expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let a = r[i + dd].mul(&inv);
            if !a.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[i + j] = r[i + j].sub(&a.mul(b));
                }
            }
            q[i] = a;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s*self + t*o = g, g monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.mul(&F::from_int(i as i64)))
                .collect(),
        )
    }

    /// Horner evaluation at a point of the coefficient field.
    pub fn eval(&self, x: &F) -> F {
        self.c
            .iter()
            .rev()
            .fold(F::zero(), |acc, a| acc.mul(x).add(a))
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.c.iter().rev().fold(Self::zero(), |acc, a| {
            acc.mul(g).add(&Self::constant(a.clone()))
        })
    }

    /// `self(x^k)`.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![F::zero(); (self.c.len() - 1) * k + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::from_coeffs(c)
    }

    /// Squarefree part: self / gcd(self, self'), made monic.
    pub fn squarefree(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            return self.monic();
        }
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Descending-degree text form, e.g. `x^2 + x + 1` or `x^8 - x^7 + 1`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let (neg, body) = term_text(a, i, var);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// Sign flag and unsigned body of the term `a * var^k`.
pub(crate) fn term_text<F: Field>(a: &F, k: usize, var: &str) -> (bool, String) {
    let power = match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    };
    let (neg, coef) = if a.is_rational_literal() {
        let s = a.render();
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    } else {
        (false, format!("({})", a.render()))
    };
    let body = if k == 0 {
        coef
    } else if coef == "1" {
        power
    } else {
        format!("{coef}*{power}")
    };
    (neg, body)
}

impl Poly<Rational> {
    /// Parse text like `x^2 + x + 1`, `1/2*t^3 - t`, `-3/7`.
    pub fn parse(s: &str, var: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in s.chars().enumerate() {
            let after_caret = cur.ends_with('^');
            if (ch == '+' || ch == '-') && !after_caret {
                if i > 0 && cur.is_empty() {
                    // "a + -b"
                    neg ^= ch == '-';
                    continue;
                }
                if i > 0 {
                    terms.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return None;
        }
        terms.push((neg, cur));
        let mut p = Self::zero();
        for (neg, t) in terms {
            let (coef, power) = match t.find(var) {
                None => (parse_rational(&t)?, 0usize),
                Some(pos) => {
                    let head = &t[..pos];
                    let tail = &t[pos + var.len()..];
                    let coef = if head.is_empty() {
                        <Rational as Field>::one()
                    } else {
                        parse_rational(head.strip_suffix('*')?)?
                    };
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')?.parse().ok()?
                    };
                    (coef, power)
                }
            };
            let coef = if neg { -coef } else { coef };
            p = p.add(&Self::monomial(coef, power));
        }
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::field::{int, rat};

    type P = Poly<Rational>;

    #[test]
    fn render_and_parse() {
        let p = P::from_ints(&[1, 1, 1]);
        assert_eq!(p.render("x"), "x^2 + x + 1");
        assert_eq!(P::parse("x^2 + x + 1", "x").unwrap(), p);
        let q = P::parse("1/2*t^3 - t - 3/7", "t").unwrap();
        assert_eq!(q.coeff(3), rat(1, 2));
        assert_eq!(q.coeff(1), int(-1));
        assert_eq!(q.render("t"), "1/2*t^3 - t - 3/7");
        assert_eq!(P::parse("-3/7", "x").unwrap(), P::constant(rat(-3, 7)));
        assert!(P::parse("x^", "x").is_none());
        assert!(P::parse("", "x").is_none());
        assert_eq!(P::zero().render("x"), "0");
        assert_eq!(P::from_ints(&[0, -1]).render("x"), "-x");
    }

    #[test]
    fn division_and_gcd() {
        let a = P::from_ints(&[-1, 0, 1]);
        let b = P::from_ints(&[-1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, P::from_ints(&[1, 1]));
        assert!(r.is_zero());
        let g = a.gcd(&P::from_ints(&[1, 2, 1]));
        assert_eq!(g, P::from_ints(&[1, 1]));
        let (g, s, t) = a.ext_gcd(&P::from_ints(&[2, 1]));
        assert_eq!(s.mul(&a).add(&t.mul(&P::from_ints(&[2, 1]))), g);
        assert!(g.is_one_poly());
    }

    #[test]
    fn calculus_helpers() {
        let p = P::from_ints(&[1, 0, 3]);
        assert_eq!(p.derivative(), P::from_ints(&[0, 6]));
        assert_eq!(p.eval(&int(2)), int(13));
        assert_eq!(p.compose(&P::from_ints(&[1, 1])), P::from_ints(&[4, 6, 3]));
        assert_eq!(p.inflate(2), P::from_ints(&[1, 0, 0, 0, 3]));
        let sq = P::from_ints(&[-1, 1]).pow(2).mul(&P::from_ints(&[2, 1]));
        assert_eq!(
            sq.squarefree(),
            P::from_ints(&[-1, 1]).mul(&P::from_ints(&[2, 1]))
        );
    }

    impl P {
        fn is_one_poly(&self) -> bool {
            *self == P::one()
        }
    }
}
