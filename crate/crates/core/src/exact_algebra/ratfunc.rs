//! Rational functions p(t)/q(t) over an exact field.

use std::fmt;

use super::field::{Field, Rational};
use super::poly::Poly;

/// Normal form: denominator monic and coprime to the numerator; zero is 0/1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    /// Returns `None` for a zero denominator.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero_());
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.exact_div(&g)?, den.exact_div(&g)?);
        let lc = d.lc();
        if !lc.is_one() {
            let inv = lc.inv()?;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Some(RatFunc { num: n, den: d })
    }

    fn zero_() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(a: F) -> Self {
        Self::from_poly(Poly::constant(a))
    }

    /// The variable t.
    pub fn t() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    /// Constant value if the function is constant.
    pub fn as_constant(&self) -> Option<F> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> RatFunc<G> {
        RatFunc::new(self.num.map(&f), self.den.map(&f))
            .expect("field map keeps denominators nonzero")
    }

    /// Substitute t -> t^k.
    pub fn inflate(&self, k: usize) -> Self {
        RatFunc::new(self.num.inflate(k), self.den.inflate(k)).expect("nonzero")
    }

    /// Order of vanishing at t = 0; `None` stands for +infinity (the zero function).
    pub fn v_t(&self) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(order(&self.num) as i64 - order(&self.den) as i64)
    }

    /// Value at t = 0 when defined (valuation >= 0).
    pub fn at_zero(&self) -> Option<F> {
        match self.v_t() {
            None => Some(F::zero()),
            Some(v) if v > 0 => Some(F::zero()),
            Some(0) => self.num.coeff(0).div(&self.den.coeff(0)),
            _ => None,
        }
    }

    pub fn render_var(&self, var: &str) -> String {
        if self.den == Poly::one() {
            return self.num.render(var);
        }
        let n = self.num.render(var);
        let d = self.den.render(var);
        let wrap = |s: String, p: &Poly<F>| {
            if p.coeffs().iter().filter(|a| !a.is_zero()).count() > 1
                || !p.lc().is_rational_literal()
            {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }
}

/// Lowest index of a nonzero coefficient.
pub(crate) fn order<F: Field>(p: &Poly<F>) -> usize {
    p.coeffs().iter().position(|a| !a.is_zero()).unwrap_or(0)
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.render_var("t"))
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_var("t"))
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn zero() -> Self {
        Self::zero_()
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
        .expect("nonzero")
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero_();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }
    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Self::new(self.den.clone(), self.num.clone())
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(F::from_rational(q))
    }
    fn render(&self) -> String {
        self.render_var("t")
    }
    fn is_rational_literal(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_rational_literal())
    }
}
