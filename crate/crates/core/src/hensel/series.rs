//! Truncated Laurent series in t over an exact field, with tracked absolute
//! precision: a `Series` stands for every series congruent to it mod t^prec.

use std::fmt;

use crate::exact_algebra::{Field, Poly, RatFunc};

/// Precision of a series known exactly (a Laurent polynomial).
pub const EXACT: i64 = i64::MAX / 4;

fn plus(p: i64, v: i64) -> i64 {
    if p >= EXACT {
        EXACT
    } else {
        (p + v).min(EXACT)
    }
}

#[derive(Clone, PartialEq)]
pub struct Series<F> {
    /// Exponent of `c[0]`, which is nonzero when `c` is nonempty.
    start: i64,
    c: Vec<F>,
    prec: i64,
}

impl<F: Field> Series<F> {
    /// Coefficients of t^start, t^(start+1), ... known modulo t^prec.
    pub fn new(start: i64, c: Vec<F>, prec: i64) -> Self {
        let mut s = Series { start, c, prec };
        s.normalize();
        s
    }

    pub fn exact(start: i64, c: Vec<F>) -> Self {
        Self::new(start, c, EXACT)
    }

    pub fn zero(prec: i64) -> Self {
        Series {
            start: 0,
            c: vec![],
            prec,
        }
    }

    pub fn constant(a: F) -> Self {
        Self::exact(0, vec![a])
    }

    pub fn from_poly(p: &Poly<F>) -> Self {
        Self::exact(0, p.coeffs().to_vec())
    }

    /// Expansion of a rational function at t = 0, known mod t^prec.
    pub fn from_ratfunc(r: &RatFunc<F>, prec: i64) -> Self {
        let num = Self::from_poly(r.num());
        if r.den().is_constant() {
            return num
                .scale(&r.den().coeff(0).inv().expect("nonzero denominator"))
                .truncate(prec);
        }
        let vn = num.valuation().unwrap_or(0);
        num.mul(&Self::from_poly(r.den()).inv(prec - vn))
            .truncate(prec)
    }

    fn normalize(&mut self) {
        if self.prec < EXACT {
            let keep = (self.prec - self.start).max(0) as usize;
            self.c.truncate(keep);
        }
        let lead = self.c.iter().position(|a| !a.is_zero());
        match lead {
            None => {
                self.c.clear();
                self.start = 0;
            }
            Some(k) => {
                self.c.drain(..k);
                self.start += k as i64;
                while self.c.last().is_some_and(|a| a.is_zero()) {
                    self.c.pop();
                }
            }
        }
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// Order of the first known nonzero term; `None` if the series is
    /// zero modulo t^prec.
    pub fn valuation(&self) -> Option<i64> {
        (!self.c.is_empty()).then_some(self.start)
    }

    /// Lower bound on the valuation of every series this one stands for.
    pub fn valuation_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Coefficient of t^k, if known.
    pub fn coeff(&self, k: i64) -> Option<F> {
        if k >= self.prec {
            return None;
        }
        if k < self.start || self.c.is_empty() {
            return Some(F::zero());
        }
        Some(
            self.c
                .get((k - self.start) as usize)
                .cloned()
                .unwrap_or_else(F::zero),
        )
    }

    /// Exponent just past the last stored coefficient.
    fn end(&self) -> i64 {
        self.start + self.c.len() as i64
    }

    /// Known nonzero terms as (exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(move |(i, a)| (self.start + i as i64, a))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.start, self.c.clone(), self.prec.min(prec))
    }

    /// The stored terms as an exact Laurent polynomial.
    pub fn as_exact(&self) -> Self {
        Self::new(self.start, self.c.clone(), EXACT)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Series<G> {
        Series::new(self.start, self.c.iter().map(f).collect(), self.prec)
    }

    pub fn scale(&self, a: &F) -> Self {
        Self::new(
            self.start,
            self.c.iter().map(|x| x.mul(a)).collect(),
            self.prec,
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.start,
            self.c.iter().map(|x| x.neg()).collect(),
            self.prec,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        if self.c.is_empty() {
            return o.truncate(prec);
        }
        if o.c.is_empty() {
            return self.truncate(prec);
        }
        let lo = self.start.min(o.start);
        let hi = self.end().max(o.end()).min(prec);
        let c = (lo..hi.max(lo))
            .map(|k| {
                let a = self.coeff(k).unwrap_or_else(F::zero);
                let b = o.coeff(k).unwrap_or_else(F::zero);
                a.add(&b)
            })
            .collect();
        Self::new(lo, c, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = plus(self.prec, o.valuation_bound()).min(plus(o.prec, self.valuation_bound()));
        if self.c.is_empty() || o.c.is_empty() {
            return Self::zero(prec);
        }
        let start = self.start + o.start;
        let len = ((self.end() + o.end() - 1).min(prec) - start).max(0) as usize;
        let mut c = vec![F::zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        Self::new(start, c, prec)
    }

    /// Inverse, known at most mod t^cap. Panics on a series with no known
    /// nonzero term.
    pub fn inv(&self, cap: i64) -> Self {
        let v = self
            .valuation()
            .expect("inverse of a series with unknown valuation");
        let rel = if self.prec >= EXACT {
            cap + v
        } else {
            (self.prec - v).min(cap + v)
        };
        let n = rel.max(0) as usize;
        let c0 = self.c[0].inv().expect("nonzero");
        let mut w: Vec<F> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                w.push(c0.clone());
                continue;
            }
            let mut acc = F::zero();
            for i in 1..=k.min(self.c.len() - 1) {
                acc = acc.add(&self.c[i].mul(&w[k - i]));
            }
            w.push(acc.neg().mul(&c0));
        }
        Self::new(-v, w, -v + rel)
    }

    pub fn div(&self, o: &Self, cap: i64) -> Self {
        if self.c.is_empty() {
            let vo = o
                .valuation()
                .expect("division by a series with unknown valuation");
            return Self::zero(plus(self.prec, -vo).min(cap));
        }
        self.mul(&o.inv(cap - self.start)).truncate(cap)
    }

    /// Value of a polynomial with rational-function coefficients, each
    /// expanded mod t^work.
    pub fn eval(p: &Poly<RatFunc<F>>, s: &Self, work: i64) -> Self {
        let mut acc = Self::zero(EXACT);
        for a in p.coeffs().iter().rev() {
            acc = acc.mul(s).add(&Self::from_ratfunc(a, work));
        }
        acc
    }

    /// Same terms and the same precision: congruent as truncated series.
    pub fn agrees_with(&self, o: &Self, prec: i64) -> bool {
        let hi = prec.min(self.prec).min(o.prec);
        let lo = self.start.min(o.start);
        (lo..hi).all(|k| self.coeff(k) == o.coeff(k))
    }
}

impl<F: Field> fmt::Display for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, a) in self.terms() {
            let (neg, body) = term(a, k);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if !self.is_exact() {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            match self.prec {
                0 => out.push_str("O(1)"),
                1 => out.push_str("O(t)"),
                p => out.push_str(&format!("O(t^{p})")),
            }
        } else if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl<F: Field> fmt::Debug for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({self})")
    }
}

fn term<F: Field>(a: &F, k: i64) -> (bool, String) {
    if k >= 0 {
        return crate::exact_algebra::poly::term_text(a, k as usize, "t");
    }
    let (neg, coef) = crate::exact_algebra::poly::term_text(a, 0, "t");
    let power = format!("t^{k}");
    (
        neg,
        if coef == "1" {
            power
        } else {
            format!("{coef}*{power}")
        },
    )
}
