//! Elements of the henselization of F(t): a squarefree polynomial over F(t)
//! together with a certified approximation singling out one of its roots in
//! F((t)).

use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::exact_algebra::{resultant, Field, Poly, RatFunc};

use super::series::Series;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HenselError {
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("coefficient of negative valuation in {0}")]
    NotIntegral(String),
    #[error("{root} is not a simple root of {poly} at t = 0")]
    NoSimpleRoot { poly: String, root: String },
    #[error("Newton iteration stalled on {0}")]
    Stalled(String),
}

/// Value of the t-adic valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TAdicValue {
    Finite(i64),
    Infinity,
}

impl TAdicValue {
    pub fn finite(self) -> Option<i64> {
        match self {
            TAdicValue::Finite(v) => Some(v),
            TAdicValue::Infinity => None,
        }
    }
}

impl std::ops::Add for TAdicValue {
    type Output = TAdicValue;
    fn add(self, o: TAdicValue) -> TAdicValue {
        match (self, o) {
            (TAdicValue::Finite(a), TAdicValue::Finite(b)) => TAdicValue::Finite(a + b),
            _ => TAdicValue::Infinity,
        }
    }
}

impl fmt::Display for TAdicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TAdicValue::Finite(v) => write!(f, "{v}"),
            TAdicValue::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for TAdicValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TAdicValue::Finite(v) => s.serialize_i64(*v),
            TAdicValue::Infinity => s.serialize_str("inf"),
        }
    }
}

pub fn v_t<F: Field>(r: &RatFunc<F>) -> TAdicValue {
    r.v_t().map_or(TAdicValue::Infinity, TAdicValue::Finite)
}

type P<F> = Poly<RatFunc<F>>;

fn render_poly<F: Field>(p: &P<F>) -> String {
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, a)| !a.is_zero())
        .map(|(k, a)| {
            let y = match k {
                0 => String::new(),
                1 => "Y".into(),
                _ => format!("Y^{k}"),
            };
            match (a.is_one(), k) {
                (true, 0) => "1".into(),
                (true, _) => y,
                (false, 0) => format!("({})", a.render_var("t")),
                (false, _) => format!("({})*{y}", a.render_var("t")),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Reduction mod t of a polynomial with integral coefficients.
fn residue_poly<F: Field>(p: &P<F>) -> Option<Poly<F>> {
    let c: Option<Vec<F>> = p.coeffs().iter().map(|a| a.at_zero()).collect();
    Some(Poly::from_coeffs(c?))
}

pub struct HenselElement<F> {
    poly: P<F>,
    exact: Option<RatFunc<F>>,
    approx: Mutex<Series<F>>,
    /// v(x - b) <= local for every other root b of `poly`.
    local: i64,
    sep: OnceLock<Option<i64>>,
}

impl<F: Field> Clone for HenselElement<F> {
    fn clone(&self) -> Self {
        let sep = OnceLock::new();
        if let Some(&s) = self.sep.get() {
            let _ = sep.set(s);
        }
        HenselElement {
            poly: self.poly.clone(),
            exact: self.exact.clone(),
            approx: Mutex::new(self.approx.lock().expect("series lock").clone()),
            local: self.local,
            sep,
        }
    }
}

impl<F: Field> fmt::Debug for HenselElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HenselElement[{}; {}]",
            render_poly(&self.poly),
            self.approx.lock().expect("series lock")
        )
    }
}

impl<F: Field> fmt::Display for HenselElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => f.write_str(&r.render_var("t")),
            None => write!(
                f,
                "root of {} near {}",
                render_poly(&self.poly),
                self.approx.lock().expect("series lock")
            ),
        }
    }
}

/// Linear polynomial Y - r.
fn linear<F: Field>(r: &RatFunc<F>) -> P<F> {
    Poly::from_coeffs(vec![r.neg(), RatFunc::one()])
}

impl<F: Field> HenselElement<F> {
    pub fn from_ratfunc(r: RatFunc<F>) -> Self {
        let s = Series::from_ratfunc(&r, 8);
        HenselElement {
            poly: linear(&r),
            exact: Some(r),
            approx: Mutex::new(s),
            local: i64::MIN / 4,
            sep: OnceLock::new(),
        }
    }

    pub fn constant(a: F) -> Self {
        Self::from_ratfunc(RatFunc::constant(a))
    }

    pub fn t() -> Self {
        Self::from_ratfunc(RatFunc::t())
    }

    /// The root of `f` with residue `a`; `f` monic with integral
    /// coefficients and `a` a simple root of f mod t.
    pub fn lift(f: &P<F>, a: &F) -> Result<Self, HenselError> {
        if f.is_zero() || !f.lc().is_one() {
            return Err(HenselError::NotMonic(render_poly(f)));
        }
        let fbar = residue_poly(f).ok_or_else(|| HenselError::NotIntegral(render_poly(f)))?;
        if !fbar.eval(a).is_zero() || fbar.derivative().eval(a).is_zero() {
            return Err(HenselError::NoSimpleRoot {
                poly: render_poly(f),
                root: a.render(),
            });
        }
        let poly = f.squarefree();
        if poly.deg0() == 1 {
            return Ok(Self::from_ratfunc(poly.coeff(0).neg()));
        }
        // other roots of a monic integral f are integral with residue != a
        let approx = Mutex::new(Series::new(0, vec![a.clone()], 1));
        Ok(HenselElement {
            poly,
            exact: None,
            approx,
            local: 0,
            sep: OnceLock::new(),
        }
        .normalized())
    }

    /// Element from a squarefree polynomial and an approximation `s` with
    /// v(s - x) >= prec(s) for the intended root x. Returns `None` if `s` is
    /// too coarse to single x out among the roots.
    fn certified(poly: P<F>, s: Series<F>) -> Option<Self> {
        let sep = separation_bound(&poly);
        let local = sep.unwrap_or(i64::MIN / 4);
        if s.prec() <= local {
            return None;
        }
        let x = HenselElement {
            poly,
            exact: None,
            approx: Mutex::new(s),
            local,
            sep: OnceLock::new(),
        };
        let _ = x.sep.set(sep);
        Some(x)
    }

    pub fn poly(&self) -> &P<F> {
        &self.poly
    }

    pub fn exact(&self) -> Option<&RatFunc<F>> {
        self.exact.as_ref()
    }

    pub fn degree(&self) -> usize {
        self.poly.deg0()
    }

    /// The series mod t^prec, extending the cache by Newton steps if needed.
    pub fn series(&self, prec: i64) -> Series<F> {
        let mut s = self.approx.lock().expect("series lock");
        debug_assert!(self.exact.is_some() || s.prec() > self.local);
        if s.prec() < prec {
            *s = match &self.exact {
                Some(r) => Series::from_ratfunc(r, prec.max(2 * s.prec())),
                None => newton(&self.poly, &s, prec).unwrap_or_else(|e| panic!("{e}")),
            };
        }
        s.truncate(prec)
    }

    /// Precision currently cached.
    pub fn cached_precision(&self) -> i64 {
        self.approx.lock().expect("series lock").prec()
    }

    /// Bound B with v(a - b) <= B for distinct roots a, b of the polynomial;
    /// `None` for a linear polynomial.
    pub fn separation(&self) -> Option<i64> {
        *self.sep.get_or_init(|| separation_bound(&self.poly))
    }

    pub fn valuation(&self) -> TAdicValue {
        if let Some(r) = &self.exact {
            return v_t(r);
        }
        // the root is nonzero, so a nonzero term shows up before t^(B+1)
        let mut p = self.cached_precision().max(4);
        loop {
            if let Some(v) = self.series(p).valuation() {
                return TAdicValue::Finite(v);
            }
            p *= 2;
        }
    }

    /// Constant term, when the valuation is >= 0.
    pub fn residue(&self) -> Option<F> {
        match self.valuation() {
            TAdicValue::Infinity => Some(F::zero()),
            TAdicValue::Finite(v) if v < 0 => None,
            _ => self.series(1).coeff(0),
        }
    }

    /// Image under a field map of the base applied to every coefficient.
    pub fn map_base(&self, f: &impl Fn(&F) -> F) -> Self {
        let poly = self.poly.map(|r| r.map(f));
        let s = self.approx.lock().expect("series lock").map(f);
        let exact = self.exact.as_ref().map(|r| r.map(f));
        HenselElement {
            poly,
            exact,
            approx: Mutex::new(s),
            local: self.local,
            sep: self.sep.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        if let Some(r) = &self.exact {
            return Self::from_ratfunc(r.neg());
        }
        let n = self.poly.deg0();
        let sign = if n % 2 == 1 {
            RatFunc::one().neg()
        } else {
            RatFunc::one()
        };
        let poly = Poly::from_coeffs(
            self.poly
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| if k % 2 == 1 { a.neg() } else { a.clone() })
                .collect(),
        )
        .scale(&sign);
        let s = self.approx.lock().expect("series lock").neg();
        HenselElement {
            poly,
            exact: None,
            approx: Mutex::new(s),
            local: self.local,
            sep: self.sep.clone(),
        }
    }

    /// `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if let Some(r) = &self.exact {
            return r.inv().map(Self::from_ratfunc);
        }
        let mut poly = self.poly.clone();
        // a nonexact element is nonzero, so a factor Y can be dropped
        while poly.coeff(0).is_zero() {
            poly = Poly::from_coeffs(poly.coeffs()[1..].to_vec());
        }
        let rev = Poly::from_coeffs(poly.coeffs().iter().rev().cloned().collect()).monic();
        let v = self.valuation().finite()?;
        let mut p = self.cached_precision().max(v + 4);
        loop {
            let s = self.series(p);
            let inv = Series::constant(F::one()).div(&s, p - 2 * v);
            if let Some(x) = Self::certified(rev.clone(), inv) {
                return Some(x.normalized());
            }
            p *= 2;
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if let (Some(a), Some(b)) = (&self.exact, &o.exact) {
            return Self::from_ratfunc(a.add(b));
        }
        let poly = combine(&self.poly, &o.poly, Op::Add);
        let mut p = self.cached_precision().min(o.cached_precision()).max(4);
        loop {
            let s = self.series(p).add(&o.series(p));
            if let Some(x) = Self::certified(poly.clone(), s) {
                return x.normalized();
            }
            p *= 2;
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if let (Some(a), Some(b)) = (&self.exact, &o.exact) {
            return Self::from_ratfunc(a.mul(b));
        }
        for (x, y) in [(self, o), (o, self)] {
            if let Some(r) = &x.exact {
                if r.is_zero() {
                    return Self::from_ratfunc(RatFunc::zero());
                }
                if r.is_one() {
                    return y.clone();
                }
            }
        }
        let poly = combine(&self.poly, &o.poly, Op::Mul);
        let mut p = self.cached_precision().min(o.cached_precision()).max(4);
        loop {
            let s = self.series(p).mul(&o.series(p));
            if let Some(x) = Self::certified(poly.clone(), s) {
                return x.normalized();
            }
            p *= 2;
        }
    }

    /// Detect membership in F(t): a degree-one polynomial, or a Pade
    /// candidate that is a root of the polynomial and agrees with the series
    /// past the separation bound.
    fn normalized(self) -> Self {
        if self.exact.is_some() {
            return self;
        }
        if self.poly.deg0() == 1 {
            let r = self
                .poly
                .coeff(0)
                .div(&self.poly.coeff(1))
                .expect("nonzero")
                .neg();
            return Self::from_ratfunc(r);
        }
        const MAX_DEG: usize = 8;
        const PADE: usize = 4;
        if self.poly.deg0() > MAX_DEG {
            return self;
        }
        let b = self.separation().expect("degree above one");
        let v = self.series(1).valuation().unwrap_or(0).min(0);
        let n = (2 * PADE as i64 + 2).max(b + 1 - v);
        let s = self.series(n + v);
        let candidate = if s.valuation().is_none() {
            Some(RatFunc::zero())
        } else {
            pade(&s, PADE)
        };
        let Some(r) = candidate else { return self };
        if !self.poly.eval(&r).is_zero() {
            return self;
        }
        if !Series::from_ratfunc(&r, b + 1).agrees_with(&self.series(b + 1), b + 1) {
            return self;
        }
        Self::from_ratfunc(r)
    }
}

/// Newton iteration from an approximation `s` of a root x of f, with
/// v(s - x) >= prec(s) and every other root farther from x than that. Under
/// this condition v(s - x) = v(f(s)) - v(f'(s)), which certifies each step.
pub fn newton<F: Field>(f: &P<F>, s: &Series<F>, target: i64) -> Result<Series<F>, HenselError> {
    let d = f.derivative();
    let mut s0 = s.as_exact();
    let mut cert = s.prec();
    for _ in 0..64 {
        if cert >= target {
            return Ok(s0.truncate(cert));
        }
        let mut work = target + 8;
        let (fs, ds, dv) = loop {
            let ds = Series::eval(&d, &s0, work);
            if let Some(dv) = ds.valuation() {
                let fs = Series::eval(f, &s0, work);
                let need = target + dv.abs();
                if (fs.prec() >= need || fs.is_exact()) && ds.prec() >= need {
                    break (fs, ds, dv);
                }
            }
            if work > target + 4096 {
                return Err(HenselError::Stalled(render_poly(f)));
            }
            work *= 2;
        };
        if fs.is_exact() && fs.valuation().is_none() {
            return Ok(s0);
        }
        cert = cert.max(fs.valuation_bound() - dv);
        if cert >= target {
            return Ok(s0.truncate(cert));
        }
        s0 = s0.sub(&fs.div(&ds, target)).truncate(target).as_exact();
    }
    Err(HenselError::Stalled(render_poly(f)))
}

/// Pade approximant a/b with deg a, deg b <= k, b(0) != 0, agreeing with
/// `s` as far as it is known.
fn pade<F: Field>(s: &Series<F>, k: usize) -> Option<RatFunc<F>> {
    let v = s.valuation()?;
    let shift = (-v).max(0);
    let n = s.prec() + shift;
    if n <= 2 * k as i64 {
        return None;
    }
    let n = n as usize;
    let coeffs: Vec<F> = (0..n as i64)
        .map(|i| s.coeff(i - shift).unwrap_or_else(F::zero))
        .collect();
    let mut r0 = Poly::monomial(F::one(), n);
    let mut r1 = Poly::from_coeffs(coeffs);
    let (mut v0, mut v1) = (Poly::<F>::zero(), Poly::<F>::one());
    while !r1.is_zero() && r1.deg0() > k {
        let (q, r) = r0.divrem(&r1);
        let v2 = v0.sub(&q.mul(&v1));
        r0 = std::mem::replace(&mut r1, r);
        v0 = std::mem::replace(&mut v1, v2);
    }
    if v1.is_zero() || v1.deg0() > k || v1.coeff(0).is_zero() {
        return None;
    }
    let den = v1.mul(&Poly::monomial(F::one(), shift as usize));
    RatFunc::new(r1, den)
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Mul,
}

/// Squarefree monic polynomial whose roots include every a + b (or a b)
/// with f(a) = 0 and g(b) = 0: the resultant eliminating X, sampled at
/// Y = 0, 1, ..., deg f deg g and interpolated.
fn combine<F: Field>(f: &P<F>, g: &P<F>, op: Op) -> P<F> {
    let (m, n) = (f.deg0(), g.deg0());
    let dd = m * n;
    let ys: Vec<RatFunc<F>> = (0..=dd)
        .map(|j| RatFunc::constant(F::from_int(j as i64)))
        .collect();
    let vals: Vec<RatFunc<F>> = ys
        .iter()
        .map(|y| {
            let h = match op {
                // g(y - X)
                Op::Add => g.compose(&Poly::from_coeffs(vec![y.clone(), RatFunc::one().neg()])),
                // X^n g(y / X)
                Op::Mul => {
                    let mut c = vec![RatFunc::zero(); n + 1];
                    let mut yk = RatFunc::one();
                    for k in 0..=n {
                        c[n - k] = g.coeff(k).mul(&yk);
                        yk = yk.mul(y);
                    }
                    Poly::from_coeffs(c)
                }
            };
            if h.is_zero() {
                RatFunc::zero()
            } else {
                resultant(f, &h).expect("nonzero polynomials")
            }
        })
        .collect();
    interpolate(&ys, &vals).squarefree()
}

/// Lagrange interpolation through (xs[i], ys[i]).
fn interpolate<F: Field>(xs: &[RatFunc<F>], ys: &[RatFunc<F>]) -> P<F> {
    let mut acc = Poly::zero();
    for (j, (xj, yj)) in xs.iter().zip(ys).enumerate() {
        if yj.is_zero() {
            continue;
        }
        let mut basis = Poly::constant(yj.clone());
        for (i, xi) in xs.iter().enumerate() {
            if i != j {
                let inv = xj.sub(xi).inv().expect("distinct nodes");
                basis = basis.mul(&Poly::from_coeffs(vec![xi.neg().mul(&inv), inv]));
            }
        }
        acc = acc.add(&basis);
    }
    acc
}

/// v(a - b) <= B for distinct roots of the squarefree polynomial f.
/// With Y = Z / t^N making f monic and integral in Z, distinct roots c, d
/// in Z satisfy v(c - d) <= v(disc)/2, because every factor of the
/// discriminant has nonnegative valuation.
pub fn separation_bound<F: Field>(f: &P<F>) -> Option<i64> {
    let f = f.monic();
    let n = f.deg0();
    if n < 2 {
        return None;
    }
    let mut big_n = 0i64;
    for k in 0..n {
        if let Some(v) = f.coeff(k).v_t() {
            let need = (-v + (n - k) as i64 - 1).div_euclid((n - k) as i64);
            big_n = big_n.max(need);
        }
    }
    let tn = RatFunc::from_poly(Poly::monomial(F::one(), big_n as usize));
    let mut scale = RatFunc::one();
    let mut c = vec![RatFunc::zero(); n + 1];
    for k in (0..=n).rev() {
        c[k] = f.coeff(k).mul(&scale);
        scale = scale.mul(&tn);
    }
    let g = Poly::from_coeffs(c);
    let disc = resultant(&g, &g.derivative()).expect("nonzero");
    let dv = disc
        .v_t()
        .expect("squarefree polynomial has nonzero discriminant");
    Some(dv.div_euclid(2) - big_n)
}

/// Decide x = y. Polynomials without a common root give a direct answer;
/// otherwise both are roots of lcm(f, g), and agreement past its separation
/// bound forces equality.
pub fn helem_eq<F: Field>(x: &HenselElement<F>, y: &HenselElement<F>) -> bool {
    if let (Some(a), Some(b)) = (&x.exact, &y.exact) {
        return a == b;
    }
    // cheap disagreement at the precision both already carry
    let p = x.cached_precision().min(y.cached_precision());
    if !x.series(p).agrees_with(&y.series(p), p) {
        return false;
    }
    let bound = if x.poly == y.poly {
        x.separation()
    } else {
        let g = x.poly.gcd(&y.poly);
        if g.is_constant() {
            return false;
        }
        let l = x.poly.mul(&y.poly).exact_div(&g).expect("gcd divides");
        separation_bound(&l)
    };
    let Some(b) = bound else { return true };
    x.series(b + 1).agrees_with(&y.series(b + 1), b + 1)
}
